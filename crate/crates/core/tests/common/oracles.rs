//! Small executions stepped by hand from the algorithm rules.
//!
//! Line format: `round;transmitters;jammed;feedback;injections`, transmitters
//! as `sender:packet` (`-` for control-only, `!` for a big flag), injections
//! as `station:packet`.

use advmac::prelude::*;

pub struct Oracle {
    pub name: &'static str,
    pub spec: AlgorithmSpec,
    pub n: usize,
    pub rho: (i128, i128),
    pub lambda: (i128, i128),
    pub b: u64,
    pub script: &'static str,
    pub horizon: Round,
    pub want: &'static [&'static str],
}

impl Oracle {
    pub fn kind(&self) -> AdversaryType {
        AdversaryType::new(rational(self.rho.0, self.rho.1), rational(self.lambda.0, self.lambda.1), self.b).unwrap()
    }

    /// Canonical trace produced by the simulator.
    pub fn simulate(&self) -> String {
        let config = self.spec.default_channel(self.n).unwrap();
        let script = AdversaryScript::parse(self.script).unwrap();
        validate_script(&script, &self.kind(), self.horizon).unwrap();
        run_simulation(&config, &self.spec.into(), scripted(script, self.kind()), self.horizon).unwrap().canonical()
    }

    pub fn expected(&self) -> String {
        self.want.iter().map(|l| format!("{l}\n")).collect()
    }
}

pub const ORACLES: &[Oracle] = &[
    // Token at 0, silent round passes it to 1, which withholds for both
    // packets; two silent rounds then bring the token back to 0 and on.
    Oracle {
        name: "rrw_station_one_unloads_two_packets",
        spec: AlgorithmSpec::Rrw,
        n: 3,
        rho: (1, 2),
        lambda: (0, 1),
        b: 2,
        script: "inject 0 1\ninject 0 1\n",
        horizon: 8,
        want: &[
            "0;;0;S;1:0,1:1",
            "1;1:0;0;H:0;",
            "2;1:1;0;H:1;",
            "3;;0;S;",
            "4;;0;S;",
            "5;;0;S;",
            "6;;0;S;",
            "7;;0;S;",
        ],
    },
    Oracle {
        name: "rrw_holder_keeps_token_for_late_arrivals",
        spec: AlgorithmSpec::Rrw,
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 0\ninject 1 0\n",
        horizon: 6,
        want: &["0;;0;S;0:0", "1;;0;S;0:1", "2;0:0;0;H:0;", "3;0:1;0;H:1;", "4;;0;S;", "5;;0;S;"],
    },
    // id 0 graduates when the token wraps after round 1; id 1 arrives while
    // station 0 unloads and waits for the next phase.
    Oracle {
        name: "of_rrw_defers_packets_injected_during_unloading",
        spec: AlgorithmSpec::OfRrw,
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 0\ninject 2 0\n",
        horizon: 8,
        want: &["0;;0;S;0:0", "1;;0;S;", "2;0:0;0;H:0;0:1", "3;;0;S;", "4;;0;S;", "5;0:1;0;H:1;", "6;;0;S;", "7;;0;S;"],
    },
    // J = 1: two void rounds move the token to 1; its first transmission is
    // jammed, the void counter reaches 1 only, and the retry is heard.
    Oracle {
        name: "jrrw_retries_a_jammed_transmission_without_moving_the_token",
        spec: AlgorithmSpec::Jrrw { j: 1 },
        n: 2,
        rho: (1, 4),
        lambda: (1, 4),
        b: 1,
        script: "inject 0 1\njam 2\n",
        horizon: 8,
        want: &["0;;0;S;1:0", "1;;0;S;", "2;1:0;1;S;", "3;1:0;0;H:0;", "4;;0;S;", "5;;0;S;", "6;;0;S;", "7;;0;S;"],
    },
    // J = 2: station 0 is heard in round 1 and pauses in round 2, so the
    // packet arriving in round 2 waits until the token returns in round 8.
    Oracle {
        name: "jrrw_exhausted_holder_waits_out_the_void_run",
        spec: AlgorithmSpec::Jrrw { j: 2 },
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 0\ninject 2 0\n",
        horizon: 10,
        want: &[
            "0;;0;S;0:0",
            "1;0:0;0;H:0;",
            "2;;0;S;0:1",
            "3;;0;S;",
            "4;;0;S;",
            "5;;0;S;",
            "6;;0;S;",
            "7;;0;S;",
            "8;0:1;0;H:1;",
            "9;;0;S;",
        ],
    },
    Oracle {
        name: "of_jrrw_sends_a_packet_one_phase_after_injection",
        spec: AlgorithmSpec::OfJrrw { j: 1 },
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 1\n",
        horizon: 9,
        want: &[
            "0;;0;S;1:0",
            "1;;0;S;",
            "2;;0;S;",
            "3;;0;S;",
            "4;;0;S;",
            "5;;0;S;",
            "6;1:0;0;H:0;",
            "7;;0;S;",
            "8;;0;S;",
        ],
    },
    Oracle {
        name: "c_rrw_control_rounds_move_the_token_and_jams_do_not",
        spec: AlgorithmSpec::CRrw,
        n: 2,
        rho: (1, 4),
        lambda: (1, 4),
        b: 1,
        script: "inject 0 1\njam 2\n",
        horizon: 6,
        want: &["0;0:-;0;H:-;1:0", "1;1:0;0;H:0;", "2;1:-;1;S;", "3;1:-;0;H:-;", "4;0:-;0;H:-;", "5;1:-;0;H:-;"],
    },
    Oracle {
        name: "ofc_rrw_sends_control_while_only_new_packets_wait",
        spec: AlgorithmSpec::OfcRrw,
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 0\ninject 2 0\n",
        horizon: 7,
        want: &[
            "0;0:-;0;H:-;0:0",
            "1;1:-;0;H:-;",
            "2;0:0;0;H:0;0:1",
            "3;0:-;0;H:-;",
            "4;1:-;0;H:-;",
            "5;0:1;0;H:1;",
            "6;0:-;0;H:-;",
        ],
    },
    // Query [0,3] collides; [0,1] finds 1, its unload ends with a silence,
    // then [2,3] from the stack finds 3; the closing silence ends the sweep.
    Oracle {
        name: "srr_splits_a_collision_and_pops_the_stack",
        spec: AlgorithmSpec::Srr,
        n: 4,
        rho: (1, 2),
        lambda: (0, 1),
        b: 2,
        script: "inject 0 1\ninject 0 3\n",
        horizon: 7,
        want: &["0;;0;S;1:0,3:1", "1;1:0,3:1;0;C;", "2;1:0;0;H:0;", "3;;0;S;", "4;3:1;0;H:1;", "5;;0;S;", "6;;0;S;"],
    },
    Oracle {
        name: "srr_unloading_station_withholds_for_new_arrivals",
        spec: AlgorithmSpec::Srr,
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 2,
        script: "inject 0 0\ninject 1 0\ninject 2 0\n",
        horizon: 6,
        want: &["0;;0;S;0:0", "1;0:0;0;H:0;0:1", "2;0:1;0;H:1;0:2", "3;0:2;0;H:2;", "4;;0;S;", "5;;0;S;"],
    },
    // Round 0 closes an empty sweep, so id 0 (injected that round) is old at
    // once; id 1 arrives mid-sweep and waits for the sweep after.
    Oracle {
        name: "of_srr_searches_only_for_old_packets",
        spec: AlgorithmSpec::OfSrr,
        n: 2,
        rho: (1, 2),
        lambda: (0, 1),
        b: 1,
        script: "inject 0 1\ninject 1 0\n",
        horizon: 6,
        want: &["0;;0;S;1:0", "1;1:0;0;H:0;0:1", "2;;0;S;", "3;0:1;0;H:1;", "4;;0;S;", "5;;0;S;"],
    },
    // Station 2 holds n = 3 packets when the token reaches it: its flagged
    // packet moves it to the front with the token; list becomes [2, 0, 1].
    Oracle {
        name: "mbtf_big_station_moves_to_front",
        spec: AlgorithmSpec::Mbtf(MbtfVariant::Pausing),
        n: 3,
        rho: (1, 2),
        lambda: (0, 1),
        b: 3,
        script: "inject 0 2\ninject 0 2\ninject 0 2\n",
        horizon: 8,
        want: &[
            "0;;0;S;2:0,2:1,2:2",
            "1;;0;S;",
            "2;2:0!;0;H:0;",
            "3;2:1;0;H:1;",
            "4;;0;S;",
            "5;;0;S;",
            "6;2:2;0;H:2;",
            "7;;0;S;",
        ],
    },
    Oracle {
        name: "mbtf_control_bits_survive_a_jammed_big_packet",
        spec: AlgorithmSpec::Mbtf(MbtfVariant::ControlBits),
        n: 2,
        rho: (1, 2),
        lambda: (1, 4),
        b: 2,
        script: "inject 0 1\ninject 0 1\njam 1\n",
        horizon: 6,
        want: &["0;0:-;0;H:-;1:0,1:1", "1;1:0!;1;S;", "2;1:0!;0;H:0;", "3;1:1;0;H:1;", "4;0:-;0;H:-;", "5;1:-;0;H:-;"],
    },
    // n = 1: the lone station is always the holder; b packets at rho = 0
    // are heard in rounds 1..=b, so the last waits b rounds.
    Oracle {
        name: "rrw_with_single_station_serves_a_burst_in_order",
        spec: AlgorithmSpec::Rrw,
        n: 1,
        rho: (0, 1),
        lambda: (0, 1),
        b: 3,
        script: "inject 0 0\ninject 0 0\ninject 0 0\n",
        horizon: 5,
        want: &["0;;0;S;0:0,0:1,0:2", "1;0:0;0;H:0;", "2;0:1;0;H:1;", "3;0:2;0;H:2;", "4;;0;S;"],
    },
];
