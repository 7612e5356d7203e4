//! Search round-robin: a sweep over the name range driven by binary search
//! with collision detection.
//!
//! A queried segment is answered by every station in it holding an eligible
//! packet. Silence means the segment is empty; a collision splits it, the
//! left half (size `⌈s/2⌉`) is queried next and the right half is pushed on a
//! stack; a heard packet makes its sender unload until a silent round, after
//! which the sweep resumes right after the sender. The sweep, and with it the
//! phase, ends when a segment comes back empty and the stack is empty.

use crate::channel::{Feedback, OutboundMessage};
use crate::StationId;

use super::StationView;

/// Inclusive range of station names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub lo: StationId,
    pub hi: StationId,
}

impl Segment {
    pub fn contains(&self, name: StationId) -> bool {
        self.lo <= name && name <= self.hi
    }

    pub fn size(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Left half of size `⌈size/2⌉` and the right remainder.
    pub fn split(&self) -> (Segment, Option<Segment>) {
        let left_len = self.size().div_ceil(2);
        let left = Segment { lo: self.lo, hi: self.lo + left_len - 1 };
        let right = (left.hi < self.hi).then(|| Segment { lo: left.hi + 1, hi: self.hi });
        (left, right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Query(Segment),
    Unload { station: StationId, rest: Option<Segment> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRoundRobin {
    pub n: usize,
    pub older_first: bool,
    pub mode: SearchMode,
    pub stack: Vec<Segment>,
    pub phase: u64,
}

impl SearchRoundRobin {
    pub fn new(n: usize, older_first: bool) -> Self {
        Self { n, older_first, mode: SearchMode::Query(Self::full(n)), stack: Vec::new(), phase: 0 }
    }

    fn full(n: usize) -> Segment {
        Segment { lo: 0, hi: n - 1 }
    }

    pub fn unloading(&self) -> Option<StationId> {
        match self.mode {
            SearchMode::Unload { station, .. } => Some(station),
            SearchMode::Query(_) => None,
        }
    }

    pub fn cursor(&self) -> StationId {
        match self.mode {
            SearchMode::Query(segment) => segment.lo,
            SearchMode::Unload { station, .. } => station,
        }
    }

    /// Segments still to be explored in this sweep, in visiting order.
    pub fn pending(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        match self.mode {
            SearchMode::Query(segment) => out.push(segment),
            SearchMode::Unload { rest: Some(rest), .. } => out.push(rest),
            SearchMode::Unload { rest: None, .. } => {}
        }
        out.extend(self.stack.iter().rev().copied());
        out
    }

    /// Whether `name` answers in the coming round when it holds a packet.
    pub fn addresses(&self, name: StationId) -> bool {
        match self.mode {
            SearchMode::Query(segment) => segment.contains(name),
            SearchMode::Unload { station, .. } => station == name,
        }
    }

    pub fn decide(&self, view: &StationView) -> Option<OutboundMessage> {
        if self.addresses(view.name) {
            view.packet_message(self.older_first)
        } else {
            None
        }
    }

    pub fn observe(&mut self, feedback: &Feedback) -> bool {
        match (self.mode, feedback) {
            (SearchMode::Query(segment), Feedback::Heard(msg)) => {
                let rest = (msg.sender < segment.hi).then(|| Segment { lo: msg.sender + 1, hi: segment.hi });
                self.mode = SearchMode::Unload { station: msg.sender, rest };
                false
            }
            (SearchMode::Query(segment), Feedback::CollisionSignal) if segment.size() > 1 => {
                let (left, right) = segment.split();
                if let Some(right) = right {
                    self.stack.push(right);
                }
                self.mode = SearchMode::Query(left);
                false
            }
            (SearchMode::Query(_), _) => self.next_segment(),
            (SearchMode::Unload { station, .. }, Feedback::Heard(msg)) if msg.sender == station => false,
            (SearchMode::Unload { rest: Some(rest), .. }, _) => {
                self.mode = SearchMode::Query(rest);
                false
            }
            (SearchMode::Unload { rest: None, .. }, _) => self.next_segment(),
        }
    }

    fn next_segment(&mut self) -> bool {
        match self.stack.pop() {
            Some(segment) => {
                self.mode = SearchMode::Query(segment);
                false
            }
            None => {
                self.mode = SearchMode::Query(Self::full(self.n));
                self.phase += 1;
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_puts_the_larger_half_left() {
        let seg = Segment { lo: 0, hi: 4 };
        assert_eq!(seg.split(), (Segment { lo: 0, hi: 2 }, Some(Segment { lo: 3, hi: 4 })));
        let pair = Segment { lo: 6, hi: 7 };
        assert_eq!(pair.split(), (Segment { lo: 6, hi: 6 }, Some(Segment { lo: 7, hi: 7 })));
        assert_eq!(Segment { lo: 3, hi: 3 }.split(), (Segment { lo: 3, hi: 3 }, None));
    }

    #[test]
    fn empty_sweep_is_a_single_query() {
        let mut search = SearchRoundRobin::new(8, false);
        assert!(search.observe(&Feedback::Silence));
        assert_eq!(search.mode, SearchMode::Query(Segment { lo: 0, hi: 7 }));
        assert_eq!(search.phase, 1);
    }

    #[test]
    fn pending_segments_partition_the_unexplored_range() {
        let mut search = SearchRoundRobin::new(8, false);
        search.observe(&Feedback::CollisionSignal);
        search.observe(&Feedback::CollisionSignal);
        let pending = search.pending();
        assert_eq!(pending, vec![Segment { lo: 0, hi: 1 }, Segment { lo: 2, hi: 3 }, Segment { lo: 4, hi: 7 }]);
        search.observe(&Feedback::Heard(OutboundMessage::packet(0, 5)));
        assert_eq!(search.unloading(), Some(0));
        assert_eq!(
            search.pending(),
            vec![Segment { lo: 1, hi: 1 }, Segment { lo: 2, hi: 3 }, Segment { lo: 4, hi: 7 }]
        );
    }
}
