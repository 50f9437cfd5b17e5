//! Decision tree for the number of linear and quadratic integrals.

use serde::Serialize;

use crate::expr::{Box2, Expr, TriState, ZeroPolicy, ZeroTester};
use crate::geometry::Metric2D;
use crate::invariants::{DerivedInvariants, InvariantError, InvariantFrame, JFRAK_PAIRING_SIGN};

/// One tested condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub condition: String,
    pub state: TriState,
    /// Sample point and value certifying a nonzero result.
    pub witness: Option<String>,
    pub admissible: usize,
    pub rejected: usize,
    pub notes: Vec<String>,
}

/// Classifier output. The dimensions are `None` when a test on the
/// decision path was undecided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobilityReport {
    pub dim_j1: Option<u8>,
    pub dim_j2: Option<u8>,
    pub trace: Vec<TraceEntry>,
    pub samples: usize,
    pub seed: u64,
    pub mode: String,
    pub confidence: String,
}

impl MobilityReport {
    pub fn is_conclusive(&self) -> bool {
        self.dim_j1.is_some() && self.dim_j2.is_some()
    }

    /// The outcome without the trace, for comparing runs.
    pub fn verdict(&self) -> (Option<u8>, Option<u8>) {
        (self.dim_j1, self.dim_j2)
    }

    /// Conditions in the order tested with their states.
    pub fn pattern(&self) -> Vec<(String, TriState)> {
        self.trace
            .iter()
            .map(|t| (t.condition.clone(), t.state))
            .collect()
    }
}

impl serde::Serialize for TriState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Decider {
    tester: ZeroTester,
    trace: Vec<TraceEntry>,
}

impl Decider {
    fn test(&mut self, condition: &str, e: &Expr) -> TriState {
        let out = self.tester.test(e);
        let witness = out.witness.as_ref().map(|(p, v)| format!("{p}: {v}"));
        self.trace.push(TraceEntry {
            condition: condition.to_string(),
            state: out.state,
            witness,
            admissible: out.admissible,
            rejected: out.rejected,
            notes: out.notes,
        });
        out.state
    }
}

/// Sample box plus sampling policy.
#[derive(Clone, Debug, Default)]
pub struct Domain {
    pub bx: Box2,
    pub policy: ZeroPolicy,
}

fn tester(g: &Metric2D, d: &Domain) -> ZeroTester {
    ZeroTester::new(d.policy.clone(), g.coord_names(), g.params.clone(), &d.bx)
}

fn report(dec: Decider, dims: (Option<u8>, Option<u8>), d: &Domain) -> MobilityReport {
    let p = &d.policy;
    let mode = match p.mode {
        crate::expr::Mode::Exact => "exact".to_string(),
        crate::expr::Mode::Float { prec } => format!("float({prec} bits)"),
    };
    let confidence = match dims {
        (Some(_), Some(_)) => format!(
            "each zero verdict rests on {} admissible points of the box; each nonzero verdict has a witness",
            p.samples
        ),
        _ => "inconclusive: a test on the decision path was undecided".to_string(),
    };
    MobilityReport {
        dim_j1: dims.0,
        dim_j2: dims.1,
        trace: dec.trace,
        samples: p.samples,
        seed: p.seed,
        mode,
        confidence,
    }
}

/// Dimension of the space of Killing fields: 3, 1 or 0.
pub fn killing_dimension(g: &Metric2D, d: &Domain) -> Result<MobilityReport, InvariantError> {
    let f = InvariantFrame::new(g, 5)?;
    let mut dec = Decider {
        tester: tester(g, d),
        trace: Vec::new(),
    };
    let dim = killing_branch(&f, &mut dec);
    Ok(report(dec, (dim, None), d))
}

fn killing_branch(f: &InvariantFrame, dec: &mut Decider) -> Option<u8> {
    match dec.test("I3 = 0", f.get("I3")?) {
        TriState::Zero => return Some(3),
        TriState::Undecided => return None,
        TriState::Nonzero => {}
    }
    match dec.test("I4b = 0", f.get("I4b")?) {
        TriState::Nonzero => return Some(0),
        TriState::Undecided => return None,
        TriState::Zero => {}
    }
    match dec.test("I5d = 0", f.get("I5d")?) {
        TriState::Zero => Some(1),
        TriState::Nonzero => Some(0),
        TriState::Undecided => None,
    }
}

/// Full classification `(dim J1, dim J2)`.
pub fn classify(g: &Metric2D, d: &Domain) -> Result<MobilityReport, InvariantError> {
    let f = InvariantFrame::new(g, 7)?;
    let mut dec = Decider {
        tester: tester(g, d),
        trace: Vec::new(),
    };
    let dims = decide(&f, &mut dec)?;
    Ok(report(dec, dims, d))
}

fn all_zero(states: &[TriState]) -> Option<bool> {
    if states.contains(&TriState::Nonzero) {
        Some(false)
    } else if states.iter().all(|s| *s == TriState::Zero) {
        Some(true)
    } else {
        None
    }
}

fn decide(
    f: &InvariantFrame,
    dec: &mut Decider,
) -> Result<(Option<u8>, Option<u8>), InvariantError> {
    match dec.test("I3 = 0", f.expect("I3")?) {
        TriState::Zero => return Ok((Some(3), Some(6))),
        TriState::Undecided => return Ok((None, None)),
        TriState::Nonzero => {}
    }
    let d = DerivedInvariants::new(f);
    match dec.test("I4b = 0", f.expect("I4b")?) {
        TriState::Undecided => Ok((None, None)),
        TriState::Zero => {
            let i5d = dec.test("I5d = 0", f.expect("I5d")?);
            let dim_j1 = match i5d {
                TriState::Zero => Some(1),
                TriState::Nonzero => Some(0),
                TriState::Undecided => None,
            };
            let d = d?;
            let j5 = dec.test("J5 = 0", &d.j5);
            // J4 is only needed when J5 vanishes
            let j4 = if j5 == TriState::Nonzero {
                TriState::Nonzero
            } else {
                dec.test("J4 = 0", &d.j4)
            };
            let dim_j2 = match all_zero(&[j5, j4]) {
                Some(true) => Some(4),
                Some(false) => match i5d {
                    TriState::Zero => Some(2),
                    TriState::Nonzero => Some(1),
                    TriState::Undecided => None,
                },
                None => None,
            };
            Ok((dim_j1, dim_j2))
        }
        TriState::Nonzero => {
            let d = d?;
            let mut vs = Vec::new();
            for (k, v) in d.vs()?.iter().enumerate() {
                let s = dec.test(&format!("V{} = 0", k + 1), v);
                vs.push(s);
                if s == TriState::Nonzero {
                    break;
                }
            }
            match all_zero(&vs) {
                Some(true) => return Ok((Some(0), Some(3))),
                None => return Ok((Some(0), None)),
                Some(false) => {}
            }
            let (r1, r2) = d.seventh_order_residuals(JFRAK_PAIRING_SIGN)?;
            let sign = if JFRAK_PAIRING_SIGN < 0 { "+" } else { "−" };
            let mut rs = vec![dec.test("|A|² − |B|² = 0", &d.modulus_difference()?)];
            if rs[0] != TriState::Nonzero {
                rs.push(dec.test(&format!("B𝔍1 {sign} A𝔍2 = 0"), &r1));
            }
            if rs.iter().all(|s| *s != TriState::Nonzero) {
                rs.push(dec.test(&format!("A𝔍3 {sign} B𝔍4 = 0"), &r2));
            }
            let dim_j2 = match all_zero(&rs) {
                Some(true) => Some(2),
                Some(false) => Some(1),
                None => None,
            };
            Ok((Some(0), dim_j2))
        }
    }
}
