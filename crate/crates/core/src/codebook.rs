//! Index-based outer codebooks with bounded pairwise intersection.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::SimParams;
use crate::types::OuterCodeword;

/// Greedy construction gives up after this many candidates per word.
pub const ATTEMPTS_PER_WORD: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub params: SimParams,
    pub words: Vec<OuterCodeword>,
}

/// A set of molecule indices in `[0, M)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: BTreeSet<usize>,
}

impl IndexSet {
    pub fn new(m: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i >= m) {
            return Err(Error::IndexOutOfRange { index: bad, m });
        }
        Ok(Self { indices })
    }

    pub fn full(m: usize) -> Self {
        Self {
            indices: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.contains(&index)
    }

    /// Ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }
}

/// Number of positions where `a` and `b` carry the same payload, i.e.
/// `|A ∩ B|` viewed as molecule sets.
pub fn intersection(a: &OuterCodeword, b: &OuterCodeword) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(count_equal(&a.payloads, &b.payloads))
}

fn count_equal(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

/// Greedy random construction: draw uniform candidates and keep each one
/// whose intersection with every kept word stays below
/// `ceil(theta * M)`.
pub fn construct_greedy<R: Rng + ?Sized>(params: &SimParams, rng: &mut R) -> Result<Codebook> {
    let params = params.clone().validate()?;
    let limit = params.intersection_limit();
    let budget = ATTEMPTS_PER_WORD * params.k;
    let mut words: Vec<OuterCodeword> = Vec::with_capacity(params.k);
    let mut attempts = 0;
    while words.len() < params.k {
        if attempts == budget {
            return Err(Error::BudgetExhausted {
                found: words.len(),
                wanted: params.k,
                attempts,
            });
        }
        attempts += 1;
        let candidate: Vec<usize> = (0..params.m).map(|_| rng.gen_range(0..params.v)).collect();
        if words
            .iter()
            .all(|w| count_equal(&w.payloads, &candidate) < limit)
        {
            words.push(OuterCodeword::new(candidate));
        }
    }
    Ok(Codebook { params, words })
}

impl Codebook {
    /// Builds the codebook deterministically from `params.seed`.
    pub fn generate(params: &SimParams) -> Result<Self> {
        construct_greedy(params, &mut crate::rng::codebook_rng(params.seed))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn word(&self, message: usize) -> &OuterCodeword {
        &self.words[message]
    }

    /// Header `M K V theta seed`, then one line of `M` payloads per word.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let p = &self.params;
        writeln!(out, "{} {} {} {} {}", p.m, self.words.len(), p.v, p.theta, p.seed)?;
        for w in &self.words {
            let line: Vec<String> = w.payloads.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Parses the file written by [`Codebook::write_to`]. Fields not stored in
    /// the file (`p`, `d_m`, ...) are taken from `template`.
    pub fn read_from<R: BufRead>(input: R, template: &SimParams) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty codebook file".into()))??;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 {
            return Err(Error::Parse(format!("bad codebook header '{header}'")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("'{s}': {e}")));
        let (m, k, v) = (num(h[0])?, num(h[1])?, num(h[2])?);
        let theta: f64 = h[3].parse().map_err(|e| Error::Parse(format!("'{}': {e}", h[3])))?;
        let seed: u64 = h[4].parse().map_err(|e| Error::Parse(format!("'{}': {e}", h[4])))?;
        let mut words = Vec::with_capacity(k);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let payloads = line.split_whitespace().map(num).collect::<Result<Vec<_>>>()?;
            if payloads.len() != m {
                return Err(Error::LengthMismatch {
                    left: payloads.len(),
                    right: m,
                });
            }
            if let Some(&bad) = payloads.iter().find(|&&x| x >= v) {
                return Err(Error::Parse(format!("payload {bad} out of range for V={v}")));
            }
            words.push(OuterCodeword::new(payloads));
        }
        if words.len() != k {
            return Err(Error::Parse(format!("expected {k} codewords, found {}", words.len())));
        }
        let params = SimParams {
            m,
            k,
            v,
            theta,
            seed,
            ..template.clone()
        };
        Ok(Codebook { params, words })
    }
}

/// Largest pairwise intersection; 0 when there are fewer than two words.
pub fn verify_intersections(cb: &Codebook) -> usize {
    let words = &cb.words;
    (0..words.len())
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .map(|w| count_equal(&words[i].payloads, &w.payloads))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Payloads of `w` at the indices of `set`, in ascending index order.
pub fn restriction(w: &OuterCodeword, set: &IndexSet) -> Result<Vec<usize>> {
    set.iter()
        .map(|i| {
            w.payloads.get(i).copied().ok_or(Error::IndexOutOfRange {
                index: i,
                m: w.len(),
            })
        })
        .collect()
}

fn restriction_counts(cb: &Codebook, set: &IndexSet) -> Result<(Vec<Vec<usize>>, HashMap<Vec<usize>, usize>)> {
    let restricted = cb
        .words
        .iter()
        .map(|w| restriction(w, set))
        .collect::<Result<Vec<_>>>()?;
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for r in &restricted {
        *counts.entry(r.clone()).or_default() += 1;
    }
    Ok((restricted, counts))
}

/// Messages whose restriction to `set` is shared by no other message.
pub fn unique_restriction_set(cb: &Codebook, set: &IndexSet) -> Result<BTreeSet<usize>> {
    let (restricted, counts) = restriction_counts(cb, set)?;
    Ok(restricted
        .iter()
        .enumerate()
        .filter(|(_, r)| counts[*r] == 1)
        .map(|(m, _)| m)
        .collect())
}

/// Number of distinct restrictions to `set`; never exceeds `V^|set|`.
pub fn distinct_restrictions(cb: &Codebook, set: &IndexSet) -> Result<usize> {
    Ok(restriction_counts(cb, set)?.1.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(p: &[usize]) -> OuterCodeword {
        OuterCodeword::new(p.to_vec())
    }

    fn book(m: usize, v: usize, words: &[&[usize]]) -> Codebook {
        Codebook {
            params: SimParams::new(m, words.len(), v, 0.0, 0, 1.0, 0),
            words: words.iter().map(|w| word(w)).collect(),
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection(&word(&[0, 1, 2]), &word(&[0, 2, 2])).unwrap(), 2);
        let a = word(&[4, 3, 2, 1, 0]);
        assert_eq!(intersection(&a, &a).unwrap(), 5);
        assert!(matches!(
            intersection(&word(&[0]), &word(&[0, 1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn random_pair_intersection_mean() {
        // E = M / V = 250, sd per pair sqrt(M * 1/4 * 3/4)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (m, v, pairs) = (1000usize, 4usize, 10_000usize);
        let mut total = 0usize;
        for _ in 0..pairs {
            let a: Vec<usize> = (0..m).map(|_| rng.gen_range(0..v)).collect();
            let b: Vec<usize> = (0..m).map(|_| rng.gen_range(0..v)).collect();
            total += intersection(&word(&a), &word(&b)).unwrap();
        }
        let mean = total as f64 / pairs as f64;
        let sd = (m as f64 * 0.25 * 0.75 / pairs as f64).sqrt();
        assert!((mean - 250.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn greedy_v1_exhausts_budget() {
        let params = SimParams::new(6, 2, 1, 0.0, 0, 0.5, 0);
        let err = Codebook::generate(&params).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { found: 1, wanted: 2, attempts: 2000 }));
        assert!(err.to_string().starts_with("budget exhausted"));
    }

    #[test]
    fn greedy_respects_limit_and_is_deterministic() {
        let params = SimParams::new(50, 100, 16, 0.0, 0, 0.5, 1);
        let cb = Codebook::generate(&params).unwrap();
        assert_eq!(cb.len(), 100);
        assert!(verify_intersections(&cb) < 25);
        assert_eq!(cb, Codebook::generate(&params).unwrap());
        let other = Codebook::generate(&SimParams { seed: 2, ..params }).unwrap();
        assert_ne!(cb.words, other.words);
    }

    #[test]
    fn greedy_single_word() {
        let params = SimParams::new(5, 1, 1, 0.0, 0, 0.01, 0);
        let cb = Codebook::generate(&params).unwrap();
        assert_eq!(cb.words, vec![word(&[0; 5])]);
        assert_eq!(verify_intersections(&cb), 0);
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify_intersections(&book(3, 3, &[&[1, 2, 0], &[1, 2, 0]])), 3);
        assert_eq!(verify_intersections(&book(3, 3, &[&[0, 1, 2], &[0, 2, 2], &[1, 1, 1]])), 2);
    }

    #[test]
    fn restriction_examples() {
        let w = word(&[5, 6, 7]);
        assert_eq!(restriction(&w, &IndexSet::new(3, [0, 2]).unwrap()).unwrap(), vec![5, 7]);
        assert!(restriction(&w, &IndexSet::default()).unwrap().is_empty());
        assert_eq!(restriction(&w, &IndexSet::full(3)).unwrap(), w.payloads);
        assert!(IndexSet::new(3, [3]).is_err());
        assert!(restriction(&word(&[1]), &IndexSet::new(3, [2]).unwrap()).is_err());
    }

    #[test]
    fn unique_restriction_examples() {
        let (a, b) = (0, 1);
        let cb = book(2, 2, &[&[a, a], &[a, b]]);
        assert!(unique_restriction_set(&cb, &IndexSet::new(2, [0]).unwrap()).unwrap().is_empty());
        assert_eq!(
            unique_restriction_set(&cb, &IndexSet::new(2, [1]).unwrap()).unwrap(),
            BTreeSet::from([0, 1])
        );
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let params = SimParams::new(12, 9, 5, 0.25, 2, 0.7, 99);
        let cb = Codebook::generate(&params).unwrap();
        let mut buf = Vec::new();
        cb.write_to(&mut buf).unwrap();
        let back = Codebook::read_from(buf.as_slice(), &params).unwrap();
        assert_eq!(back, cb);
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        assert_eq!(buf, again);
        assert!(String::from_utf8(buf).unwrap().starts_with("12 9 5 0.7 99\n"));
    }

    #[test]
    fn file_rejects_short_rows() {
        let params = SimParams::new(3, 1, 2, 0.0, 0, 1.0, 0);
        assert!(Codebook::read_from("3 1 2 1 0\n0 1\n".as_bytes(), &params).is_err());
        assert!(Codebook::read_from("3 2 2 1 0\n0 1 1\n".as_bytes(), &params).is_err());
        assert!(Codebook::read_from("3 1 2 1 0\n0 1 2\n".as_bytes(), &params).is_err());
    }
}
