//! Validates a hand-written adversary script against a type, replays it and
//! shows that an over-budget script is rejected with the offending window.

use advmac::prelude::*;

const SCRIPT: &str = "\
# two packets for station 1, then a jam while it unloads
inject 0 1
inject 0 1
jam 3
inject 4 0
";

fn main() -> advmac::Result<()> {
    let script = AdversaryScript::parse(SCRIPT)?;
    let kind = AdversaryType::new(rational(1, 4), rational(1, 4), 2)?;
    validate_script(&script, &kind, 20)?;

    let algorithm = AlgorithmSpec::Jrrw { j: kind.jamming_burstiness() as u32 };
    let config = algorithm.default_channel(3)?;
    let trace = run_simulation(&config, &algorithm.into(), scripted(script.clone(), kind), 20)?;
    print!("{}", trace.canonical());

    // Extracting the script back from the trace gives the same events.
    assert_eq!(AdversaryScript::from_trace(&trace), script);

    let tight = AdversaryType::new(rational(1, 4), rational(1, 4), 1)?;
    match validate_script(&script, &tight, 20) {
        Ok(()) => println!("accepted"),
        Err(e) => println!("\nagainst {tight}: {e}"),
    }
    Ok(())
}
