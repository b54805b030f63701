use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One inner codeword, identified by its index class and the payload
/// chosen within that class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Molecule {
    pub index: usize,
    pub payload: usize,
}

impl Molecule {
    pub fn new(index: usize, payload: usize) -> Self {
        Self { index, payload }
    }
}

/// An index-based outer codeword: entry `j` is the payload of the unique
/// molecule with index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OuterCodeword {
    pub payloads: Vec<usize>,
}

impl OuterCodeword {
    pub fn new(payloads: Vec<usize>) -> Self {
        Self { payloads }
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn molecule(&self, index: usize) -> Molecule {
        Molecule::new(index, self.payloads[index])
    }

    pub fn contains(&self, molecule: Molecule) -> bool {
        self.payloads.get(molecule.index) == Some(&molecule.payload)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadRecord {
    /// 1-based read number.
    pub time: usize,
    pub sampled: Molecule,
    pub error: bool,
    pub observed: Molecule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Decided { message: usize, reads: usize },
    Failed { reads: usize },
    Truncated { read_cap: usize },
}

impl Verdict {
    pub fn reads(&self) -> usize {
        match *self {
            Verdict::Decided { reads, .. } | Verdict::Failed { reads } => reads,
            Verdict::Truncated { read_cap } => read_cap,
        }
    }

    pub fn decided(&self) -> Option<usize> {
        match *self {
            Verdict::Decided { message, .. } => Some(message),
            _ => None,
        }
    }

    /// Anything other than deciding the true message counts as an error.
    pub fn is_error(&self, true_message: usize) -> bool {
        self.decided() != Some(true_message)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Verdict::Decided { message, reads } => write!(f, "decided {message} {reads}"),
            Verdict::Failed { reads } => write!(f, "failed {reads}"),
            Verdict::Truncated { read_cap } => write!(f, "truncated {read_cap}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<ReadRecord>,
    pub verdict: Verdict,
    pub true_message: usize,
}

impl Trace {
    pub fn is_consistent(&self) -> bool {
        self.records.len() == self.verdict.reads()
            && self
                .records
                .iter()
                .enumerate()
                .all(|(i, r)| r.time == i + 1 && (r.error || r.observed == r.sampled))
    }

    /// Replay file: one line per read
    /// `time index payload errorFlag observedIndex observedPayload`,
    /// then `verdict <kind> <args..> true <message>`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            writeln!(
                out,
                "{} {} {} {} {} {}",
                r.time,
                r.sampled.index,
                r.sampled.payload,
                u8::from(r.error),
                r.observed.index,
                r.observed.payload
            )?;
        }
        writeln!(out, "verdict {} true {}", self.verdict, self.true_message)?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("trace text is ASCII")
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut records = Vec::new();
        for line in input.lines() {
            let line = line?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields[0] == "verdict" {
                return parse_trailer(&fields).map(|(verdict, true_message)| Trace {
                    records,
                    verdict,
                    true_message,
                });
            }
            if fields.len() != 6 {
                return Err(Error::Parse(format!("bad read line '{line}'")));
            }
            let n = parse_all(&fields)?;
            let error = match n[3] {
                0 => false,
                1 => true,
                other => return Err(Error::Parse(format!("bad error flag {other}"))),
            };
            records.push(ReadRecord {
                time: n[0],
                sampled: Molecule::new(n[1], n[2]),
                error,
                observed: Molecule::new(n[4], n[5]),
            });
        }
        Err(Error::Parse("missing verdict line".into()))
    }
}

fn parse_all(fields: &[&str]) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|s| s.parse::<usize>().map_err(|e| Error::Parse(format!("'{s}': {e}"))))
        .collect()
}

fn parse_trailer(fields: &[&str]) -> Result<(Verdict, usize)> {
    let bad = || Error::Parse(format!("bad verdict line '{}'", fields.join(" ")));
    let (verdict, rest) = match fields.get(1).copied() {
        Some("decided") if fields.len() == 6 => {
            let n = parse_all(&fields[2..4])?;
            (Verdict::Decided { message: n[0], reads: n[1] }, &fields[4..])
        }
        Some("failed") if fields.len() == 5 => {
            let n = parse_all(&fields[2..3])?;
            (Verdict::Failed { reads: n[0] }, &fields[3..])
        }
        Some("truncated") if fields.len() == 5 => {
            let n = parse_all(&fields[2..3])?;
            (Verdict::Truncated { read_cap: n[0] }, &fields[3..])
        }
        _ => return Err(bad()),
    };
    if rest[0] != "true" {
        return Err(bad());
    }
    Ok((verdict, parse_all(&rest[1..2])?[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_trace() -> impl Strategy<Value = Trace> {
        let record = (0usize..50, 0usize..9, any::<bool>(), 0usize..50, 0usize..9);
        (prop::collection::vec(record, 0..40), 0usize..3, 0usize..20, 1usize..100).prop_map(
            |(raw, kind, msg, cap)| {
                let records: Vec<ReadRecord> = raw
                    .into_iter()
                    .enumerate()
                    .map(|(i, (idx, pay, error, oidx, opay))| {
                        let sampled = Molecule::new(idx, pay);
                        ReadRecord {
                            time: i + 1,
                            sampled,
                            error,
                            observed: if error { Molecule::new(oidx, opay) } else { sampled },
                        }
                    })
                    .collect();
                let reads = records.len();
                let verdict = match kind {
                    0 => Verdict::Decided { message: msg, reads },
                    1 => Verdict::Failed { reads },
                    _ => Verdict::Truncated { read_cap: cap.max(reads) },
                };
                Trace { records, verdict, true_message: msg / 2 }
            },
        )
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(trace in arb_trace()) {
            let text = trace.to_text();
            prop_assert_eq!(&Trace::read_from(text.as_bytes()).unwrap(), &trace);
            let json = serde_json::to_string(&trace).unwrap();
            prop_assert_eq!(&serde_json::from_str::<Trace>(&json).unwrap(), &trace);
        }
    }

    #[test]
    fn trailer_format() {
        let t = Trace {
            records: vec![ReadRecord {
                time: 1,
                sampled: Molecule::new(2, 1),
                error: true,
                observed: Molecule::new(2, 0),
            }],
            verdict: Verdict::Decided { message: 3, reads: 1 },
            true_message: 0,
        };
        assert_eq!(t.to_text(), "1 2 1 1 2 0\nverdict decided 3 1 true 0\n");
        assert!(t.is_consistent());
        assert!(t.verdict.is_error(0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Trace::read_from("1 2 3\n".as_bytes()).is_err());
        assert!(Trace::read_from("1 0 0 0 0 0\n".as_bytes()).is_err());
        assert!(Trace::read_from("verdict maybe 1 true 0\n".as_bytes()).is_err());
        assert!(Trace::read_from("1 0 0 2 0 0\nverdict failed 1 true 0\n".as_bytes()).is_err());
    }
}
