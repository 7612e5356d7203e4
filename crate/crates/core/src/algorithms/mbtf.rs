use crate::channel::{Feedback, OutboundMessage};
use crate::StationId;

use super::{MbtfVariant, StationView};

/// Move-big-to-front. All stations keep the same list of names; the token
/// sits at a list position. A station with at least `n` queued packets is big
/// and flags its packets; hearing a flagged packet moves the sender to the
/// front of the list and the token with it. Any other heard message, or a
/// pause in the pausing variant, passes the token to the next position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveBigToFront {
    pub n: usize,
    pub variant: MbtfVariant,
    pub list: Vec<StationId>,
    pub position: usize,
}

impl MoveBigToFront {
    pub fn new(n: usize, variant: MbtfVariant) -> Self {
        Self { n, variant, list: (0..n).collect(), position: 0 }
    }

    pub fn holder(&self) -> StationId {
        self.list[self.position]
    }

    pub fn behind_holder(&self) -> StationId {
        self.list[(self.position + self.n - 1) % self.n]
    }

    /// List position of a station.
    pub fn position_of(&self, station: StationId) -> usize {
        self.list.iter().position(|&s| s == station).expect("list is a permutation")
    }

    pub fn decide(&self, view: &StationView) -> Option<OutboundMessage> {
        if view.name != self.holder() {
            return None;
        }
        match view.queue.front() {
            Some(&id) if view.queue.len() >= self.n => Some(OutboundMessage::big_packet(view.name, id)),
            Some(&id) => Some(OutboundMessage::packet(view.name, id)),
            None if self.variant == MbtfVariant::ControlBits => Some(OutboundMessage::control(view.name)),
            None => None,
        }
    }

    pub fn observe(&mut self, feedback: &Feedback) -> bool {
        match feedback {
            Feedback::Heard(msg) if msg.big_flag => {
                let at = self.position_of(msg.sender);
                self.list[..=at].rotate_right(1);
                self.position = 0;
            }
            Feedback::Heard(_) => self.pass(),
            _ if self.variant == MbtfVariant::Pausing => self.pass(),
            _ => {}
        }
        false
    }

    fn pass(&mut self) {
        self.position = (self.position + 1) % self.n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_sender_moves_to_front_and_keeps_token() {
        let mut m = MoveBigToFront::new(4, MbtfVariant::Pausing);
        m.observe(&Feedback::Silence);
        m.observe(&Feedback::Silence);
        assert_eq!(m.holder(), 2);
        m.observe(&Feedback::Heard(OutboundMessage::big_packet(2, 0)));
        assert_eq!(m.list, vec![2, 0, 1, 3]);
        assert_eq!((m.position, m.holder()), (0, 2));
        m.observe(&Feedback::Heard(OutboundMessage::packet(2, 1)));
        assert_eq!(m.holder(), 0);
        assert_eq!(m.behind_holder(), 2);
    }

    #[test]
    fn control_variant_holds_token_through_void_rounds() {
        let mut m = MoveBigToFront::new(3, MbtfVariant::ControlBits);
        m.observe(&Feedback::Silence);
        assert_eq!(m.holder(), 0);
        m.observe(&Feedback::Heard(OutboundMessage::control(0)));
        assert_eq!(m.holder(), 1);
    }
}
