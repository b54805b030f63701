//! Sequential consistency decoder.
//!
//! A codeword is consistent while at most `d_m` of the *distinct* observed
//! molecules lie outside it. The decoder keeps reading until exactly one
//! codeword is consistent and outputs it; if none remains it fails.

use std::collections::HashSet;

use crate::codebook::Codebook;
use crate::types::{Molecule, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    Stop(usize),
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderState {
    pub seen: HashSet<Molecule>,
    /// `outside[m]`: distinct observed molecules not in codeword `m`.
    pub outside: Vec<usize>,
    pub reads: usize,
    consistent: usize,
}

impl DecoderState {
    pub fn new(k: usize) -> Self {
        Self {
            seen: HashSet::new(),
            outside: vec![0; k],
            reads: 0,
            consistent: k,
        }
    }

    pub fn consistent_count(&self) -> usize {
        self.consistent
    }

    pub fn consistent_set(&self, d_m: usize) -> Vec<usize> {
        (0..self.outside.len()).filter(|&m| self.outside[m] <= d_m).collect()
    }
}

/// Distinct molecules of `seen` that are not part of `w`.
pub fn outside_count<'a>(seen: impl IntoIterator<Item = &'a Molecule>, w: &crate::types::OuterCodeword) -> usize {
    seen.into_iter().filter(|&&x| !w.contains(x)).count()
}

/// Feeds one observed molecule into `state`.
pub fn step(state: &mut DecoderState, cb: &Codebook, observed: Molecule) -> Step {
    let d_m = cb.params.d_m;
    state.reads += 1;
    if state.seen.insert(observed) {
        for (m, w) in cb.words.iter().enumerate() {
            if !w.contains(observed) {
                state.outside[m] += 1;
                if state.outside[m] == d_m + 1 {
                    state.consistent -= 1;
                }
            }
        }
    }
    match state.consistent {
        0 => Step::Fail,
        1 => Step::Stop(
            state
                .outside
                .iter()
                .position(|&o| o <= d_m)
                .expect("one consistent codeword"),
        ),
        _ => Step::Continue,
    }
}

/// Decoder bound to a codebook.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    cb: &'a Codebook,
    state: DecoderState,
}

impl<'a> Decoder<'a> {
    pub fn new(cb: &'a Codebook) -> Self {
        Self {
            cb,
            state: DecoderState::new(cb.len()),
        }
    }

    pub fn step(&mut self, observed: Molecule) -> Step {
        step(&mut self.state, self.cb, observed)
    }

    pub fn state(&self) -> &DecoderState {
        &self.state
    }
}

/// Runs the decoder over `reads` until it stops, fails, or `read_cap` reads
/// have been consumed. Nothing past the stopping read is pulled from the
/// iterator.
pub fn run(cb: &Codebook, reads: impl IntoIterator<Item = Molecule>, read_cap: usize) -> Verdict {
    let mut decoder = Decoder::new(cb);
    for observed in reads.into_iter().take(read_cap) {
        match decoder.step(observed) {
            Step::Continue => {}
            Step::Stop(message) => {
                return Verdict::Decided {
                    message,
                    reads: decoder.state.reads,
                }
            }
            Step::Fail => {
                return Verdict::Failed {
                    reads: decoder.state.reads,
                }
            }
        }
    }
    // an exhausted stream shorter than the cap also lands here
    Verdict::Truncated { read_cap }
}

/// Stop of the error-free run of message `m` along an index sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoErrorStop {
    pub time: usize,
    pub decoded: usize,
}

/// Decodes the error-free read stream `(f(j), A_m[f(j)])` for
/// `j = 1..=horizon`. Returns `None` if the decoder does not stop.
pub fn stopping_time_no_errors(cb: &Codebook, m: usize, f: &[usize], horizon: usize) -> Option<NoErrorStop> {
    let word = cb.word(m);
    let mut decoder = Decoder::new(cb);
    for &idx in f.iter().take(horizon) {
        match decoder.step(word.molecule(idx)) {
            Step::Continue => {}
            Step::Stop(decoded) => {
                return Some(NoErrorStop {
                    time: decoder.state.reads,
                    decoded,
                })
            }
            // the true word is never inconsistent without errors
            Step::Fail => return None,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SimParams;
    use crate::types::OuterCodeword;

    const A: usize = 0;
    const B: usize = 1;

    fn book(d_m: usize, words: &[&[usize]]) -> Codebook {
        let m = words[0].len();
        Codebook {
            params: SimParams::new(m, words.len(), 2, 0.0, d_m, 1.0, 0),
            words: words.iter().map(|w| OuterCodeword::new(w.to_vec())).collect(),
        }
    }

    #[test]
    fn outside_count_examples() {
        let w = OuterCodeword::new(vec![A, B, A]);
        let seen = [Molecule::new(0, A), Molecule::new(1, B)];
        assert_eq!(outside_count(&seen, &w), 0);
        let w2 = OuterCodeword::new(vec![B, A, A]);
        assert_eq!(outside_count(&[Molecule::new(0, A)], &w2), 1);

        let w = OuterCodeword::new(vec![0, 1, 2, 3, 4, 5]);
        let seen = [
            Molecule::new(0, 0),
            Molecule::new(1, 1),
            Molecule::new(2, 9),
            Molecule::new(3, 3),
            Molecule::new(4, 4),
            Molecule::new(4, 7),
        ];
        // brute-force recount
        let expected = seen.iter().filter(|x| w.payloads[x.index] != x.payload).count();
        assert_eq!(expected, 2);
        assert_eq!(outside_count(&seen, &w), expected);
    }

    #[test]
    fn hand_traced_stop() {
        // 1-based indices 1, 3, 4 become 0, 2, 3
        let cb = book(1, &[&[A, A, A, A], &[A, A, B, B]]);
        let mut dec = Decoder::new(&cb);
        assert_eq!(dec.step(Molecule::new(0, A)), Step::Continue);
        assert_eq!(dec.step(Molecule::new(2, B)), Step::Continue);
        assert_eq!(dec.step(Molecule::new(3, B)), Step::Stop(1));
        assert_eq!(dec.state().reads, 3);
    }

    #[test]
    fn duplicate_leaves_state() {
        let cb = book(1, &[&[A, A, A, A], &[A, A, B, B]]);
        let mut dec = Decoder::new(&cb);
        dec.step(Molecule::new(2, B));
        let before = dec.state().clone();
        assert_eq!(dec.step(Molecule::new(2, B)), Step::Continue);
        assert_eq!(dec.state().seen, before.seen);
        assert_eq!(dec.state().outside, before.outside);
    }

    #[test]
    fn hand_traced_failure() {
        let cb = book(0, &[&[A, A], &[B, B]]);
        let mut dec = Decoder::new(&cb);
        assert_eq!(dec.step(Molecule::new(0, A)), Step::Stop(0));
        let mut state = DecoderState::new(2);
        step(&mut state, &cb, Molecule::new(0, A));
        assert_eq!(step(&mut state, &cb, Molecule::new(1, B)), Step::Fail);
        assert_eq!(state.reads, 2);
        // run() stops at the first decision, so feed the failing order directly
        let v = run(&cb, [Molecule::new(0, A), Molecule::new(1, B)], 10);
        assert_eq!(v, Verdict::Decided { message: 0, reads: 1 });

        let cb = book(0, &[&[A, A], &[A, B]]);
        assert_eq!(run(&cb, [Molecule::new(0, B)], 10), Verdict::Failed { reads: 1 });
    }

    #[test]
    fn zero_cap_truncates() {
        let cb = book(0, &[&[A, A], &[B, B]]);
        assert_eq!(run(&cb, [Molecule::new(0, A)], 0), Verdict::Truncated { read_cap: 0 });
    }

    #[test]
    fn run_stops_consuming() {
        let cb = book(1, &[&[A, A, A, A], &[A, A, B, B]]);
        let mut pulled = 0;
        let stream = [(0, A), (2, B), (3, B), (1, A), (1, B)].into_iter().map(|(i, p)| {
            pulled += 1;
            Molecule::new(i, p)
        });
        assert_eq!(run(&cb, stream, 100), Verdict::Decided { message: 1, reads: 3 });
        assert_eq!(pulled, 3);
    }

    #[test]
    fn no_error_stopping_time() {
        let cb = book(1, &[&[A, A, A, A], &[B, B, B, B]]);
        assert_eq!(
            stopping_time_no_errors(&cb, 1, &[0, 1, 2, 3], 4),
            Some(NoErrorStop { time: 2, decoded: 1 })
        );
        let cb = book(0, &[&[A, A, B], &[A, B, A]]);
        assert_eq!(stopping_time_no_errors(&cb, 0, &[0; 20], 20), None);
        assert_eq!(stopping_time_no_errors(&cb, 0, &[0, 1], 1), None);
    }
}
