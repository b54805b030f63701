use std::collections::{BTreeSet, HashMap};

/// Distinct-index statistics of an index-sequence prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZStats {
    /// Distinct indices.
    pub z: usize,
    /// Indices seen exactly once.
    pub z1: usize,
}

pub fn z_stats(f: &[usize], h_m: usize) -> ZStats {
    let counts = multiplicities(&f[..h_m]);
    ZStats {
        z: counts.len(),
        z1: counts.values().filter(|&&c| c == 1).count(),
    }
}

/// `M (1 - (1 - 1/M)^n)`.
pub fn expected_z(m: usize, n: usize) -> f64 {
    let mf = m as f64;
    mf * (1.0 - (1.0 - 1.0 / mf).powf(n as f64))
}

/// `n (1 - 1/M)^{n-1}`.
pub fn expected_z1(m: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mf = m as f64;
    n as f64 * (1.0 - 1.0 / mf).powi(n as i32 - 1)
}

/// A split of the read times `1..=h_m` into a flippable part `t1`
/// (at most `d_m` times) and a part `t2` covering few distinct indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPartition {
    pub in_s: bool,
    /// 1-based read times.
    pub t1: BTreeSet<usize>,
    pub t2: BTreeSet<usize>,
    /// Whether `Z - min(Z1, dM) <= R'M`, the cheaper sufficient test.
    pub sufficient: bool,
}

impl SPartition {
    /// Distinct indices `{f(j) : j in t2}`.
    pub fn t2_indices(&self, f: &[usize]) -> BTreeSet<usize> {
        self.t2.iter().map(|&j| f[j - 1]).collect()
    }
}

fn multiplicities(prefix: &[usize]) -> HashMap<usize, usize> {
    let mut counts = HashMap::new();
    for &x in prefix {
        *counts.entry(x).or_insert(0) += 1;
    }
    counts
}

/// Decides whether the first `h_m` reads of `f` can be split so that at
/// most `d_m` times go to `t1` and the rest cover at most `r_prime_m`
/// distinct indices.
///
/// Moving only some occurrences of a value into `t1` never lowers the
/// distinct count of `t2`, so an optimal `t1` is a union of whole value
/// groups. Each group of multiplicity `c` costs `c` slots and removes
/// exactly one distinct value, so taking groups in ascending multiplicity
/// removes the most values for the budget (exchange argument). The
/// returned split is the greedy one even when `in_s` is false.
pub fn s_membership(f: &[usize], h_m: usize, d_m: usize, r_prime_m: usize) -> SPartition {
    let prefix = &f[..h_m];
    let counts = multiplicities(prefix);
    let stats = ZStats {
        z: counts.len(),
        z1: counts.values().filter(|&&c| c == 1).count(),
    };

    let mut groups: Vec<(usize, usize)> = counts.iter().map(|(&value, &c)| (c, value)).collect();
    groups.sort_unstable();
    let mut budget = d_m;
    let mut removed = BTreeSet::new();
    for (c, value) in groups {
        if c > budget {
            break;
        }
        budget -= c;
        removed.insert(value);
    }

    let (t1, t2): (BTreeSet<usize>, BTreeSet<usize>) =
        (1..=h_m).partition(|&j| removed.contains(&prefix[j - 1]));
    SPartition {
        in_s: stats.z - removed.len() <= r_prime_m,
        t1,
        t2,
        sufficient: stats.z - stats.z1.min(d_m) <= r_prime_m,
    }
}
