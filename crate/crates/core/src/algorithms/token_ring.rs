//! Round-robin withholding and its variants.
//!
//! The token visits stations in the cyclic order of names. The holder unloads
//! its (old) packets; how the token leaves an exhausted holder is the only
//! difference between the family members.

use crate::channel::{Feedback, OutboundMessage};
use crate::StationId;

use super::StationView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PassRule {
    /// One silent round passes the token (RRW).
    Silence,
    /// `threshold` contiguous void rounds pass the token; a heard packet or a
    /// pass resets the counter (JRRW with `threshold = J + 1`).
    VoidRun { threshold: u32 },
    /// An exhausted holder sends a control-only message and a heard control
    /// message passes the token; void rounds are taken as jammed (C-RRW).
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRing {
    pub n: usize,
    pub rule: PassRule,
    pub older_first: bool,
    pub holder: StationId,
    pub void_counter: u32,
    /// The holder has been heard since the token reached it.
    pub served: bool,
    pub phase: u64,
}

impl TokenRing {
    pub fn new(n: usize, rule: PassRule, older_first: bool) -> Self {
        Self { n, rule, older_first, holder: 0, void_counter: 0, served: false, phase: 0 }
    }

    pub fn decide(&self, view: &StationView) -> Option<OutboundMessage> {
        if view.name != self.holder || view.released {
            return None;
        }
        match view.packet_message(self.older_first) {
            Some(msg) => Some(msg),
            None if self.rule == PassRule::Control => Some(OutboundMessage::control(view.name)),
            None => None,
        }
    }

    /// Under the void-run rule a holder that pauses after being heard has
    /// exhausted its queue: it stays silent until the token moves, so packets
    /// that arrive during the closing void run wait for the next visit.
    /// Without this a holder refilled every `J + 1` rounds keeps the token
    /// forever.
    pub fn releases_on_pause(&self) -> bool {
        self.served && matches!(self.rule, PassRule::VoidRun { threshold } if threshold > 1)
    }

    /// Whether the last call to [`observe`](Self::observe) moved the token,
    /// given the feedback it saw.
    pub fn just_moved(&self, feedback: &Feedback) -> bool {
        match self.rule {
            PassRule::Silence => !matches!(feedback, Feedback::Heard(_)),
            PassRule::VoidRun { .. } => feedback.is_void() && self.void_counter == 0,
            PassRule::Control => matches!(feedback, Feedback::Heard(m) if m.control_only),
        }
    }

    pub fn observe(&mut self, feedback: &Feedback) -> bool {
        match (self.rule, feedback) {
            (PassRule::Silence, Feedback::Heard(_)) => false,
            (PassRule::Silence, _) => self.advance(),
            (PassRule::VoidRun { .. }, Feedback::Heard(_)) => {
                self.void_counter = 0;
                self.served = true;
                false
            }
            (PassRule::VoidRun { threshold }, _) => {
                self.void_counter += 1;
                if self.void_counter >= threshold {
                    self.void_counter = 0;
                    self.advance()
                } else {
                    false
                }
            }
            (PassRule::Control, Feedback::Heard(msg)) if msg.control_only => self.advance(),
            (PassRule::Control, _) => false,
        }
    }

    /// Moves the token on; wrapping back to station 0 closes a phase.
    fn advance(&mut self) -> bool {
        self.served = false;
        self.holder = (self.holder + 1) % self.n;
        if self.holder == 0 {
            self.phase += 1;
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn void_run_counter_resets_on_heard_packets() {
        let mut ring = TokenRing::new(3, PassRule::VoidRun { threshold: 2 }, false);
        assert!(!ring.observe(&Feedback::Silence));
        assert_eq!((ring.holder, ring.void_counter), (0, 1));
        ring.observe(&Feedback::Heard(OutboundMessage::packet(0, 0)));
        assert_eq!((ring.holder, ring.void_counter), (0, 0));
        ring.observe(&Feedback::Silence);
        ring.observe(&Feedback::Silence);
        assert_eq!((ring.holder, ring.void_counter), (1, 0));
    }

    #[test]
    fn control_rule_ignores_void_rounds() {
        let mut ring = TokenRing::new(2, PassRule::Control, false);
        ring.observe(&Feedback::Silence);
        ring.observe(&Feedback::CollisionSignal);
        assert_eq!(ring.holder, 0);
        ring.observe(&Feedback::Heard(OutboundMessage::packet(0, 3)));
        assert_eq!(ring.holder, 0);
        assert!(!ring.observe(&Feedback::Heard(OutboundMessage::control(0))));
        assert!(ring.observe(&Feedback::Heard(OutboundMessage::control(1))));
        assert_eq!((ring.holder, ring.phase), (0, 1));
    }

    #[test]
    fn empty_holder_pauses_or_sends_control() {
        let view = StationView::new(0);
        assert_eq!(TokenRing::new(2, PassRule::Silence, false).decide(&view), None);
        assert_eq!(TokenRing::new(2, PassRule::Control, false).decide(&view), Some(OutboundMessage::control(0)));
        assert_eq!(TokenRing::new(2, PassRule::Silence, false).decide(&StationView::new(1)), None);
    }

    #[test]
    fn released_holder_stays_silent() {
        let mut ring = TokenRing::new(2, PassRule::VoidRun { threshold: 3 }, false);
        assert!(!ring.releases_on_pause());
        ring.observe(&Feedback::Heard(OutboundMessage::packet(0, 1)));
        assert!(ring.releases_on_pause());
        let mut short = TokenRing::new(2, PassRule::VoidRun { threshold: 1 }, false);
        short.observe(&Feedback::Heard(OutboundMessage::packet(0, 1)));
        assert!(!short.releases_on_pause());
        let mut view = StationView::new(0);
        view.queue.push_back(7);
        assert_eq!(ring.decide(&view), Some(OutboundMessage::packet(0, 7)));
        view.released = true;
        assert_eq!(ring.decide(&view), None);
    }
}
