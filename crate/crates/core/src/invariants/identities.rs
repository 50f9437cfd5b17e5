//! The ten first-derivative identities of the invariant tower and the
//! commutation rule for the two invariant derivations.

use crate::expr::{Expr, TriState, ZeroTester};
use crate::geometry::lie_bracket;

use super::InvariantFrame;

#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub name: String,
    pub state: TriState,
    /// `"(x, y): value"` for the first nonzero sample.
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    /// `I3` vanishes identically, so the identities carry no information.
    pub degenerate: bool,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_zero(&self) -> bool {
        !self.degenerate && self.results.iter().all(|r| r.state == TriState::Zero)
    }
}

/// Residuals `lhs − rhs` of the identities, with display names.
pub fn identity_residuals(f: &InvariantFrame) -> Vec<(String, Expr)> {
    let i = |n: &str| f.get(n).cloned().expect("frame of order >= 5");
    let (i2, i3, i4a, i4b, i4c) = (i("I2"), i("I3"), i("I4a"), i("I4b"), i("I4c"));
    let (i5a, i5b, i5c, i5d) = (i("I5a"), i("I5b"), i("I5c"), i("I5d"));
    let n1 = |e: &Expr| f.invariant_derivative(1, e);
    let n2 = |e: &Expr| f.invariant_derivative(2, e);
    let two = Expr::int(2);
    let mut out = vec![
        ("∇1 I2 = I3".to_string(), n1(&i2) - &i3),
        ("∇2 I2 = 0".to_string(), n2(&i2)),
        ("∇1 I3 = 2 I4a".to_string(), n1(&i3) - &two * &i4a),
        ("∇2 I3 = 2 I4b".to_string(), n2(&i3) - &two * &i4b),
        (
            "∇1 I4a = I5a + 2(I4a² + I4b²)/I3".to_string(),
            n1(&i4a) - &i5a - &two * (i4a.pow(2) + i4b.pow(2)) / &i3,
        ),
        (
            "∇2 I4a = I5b + 2 I4b(I4a + I4c)/I3".to_string(),
            n2(&i4a) - &i5b - &two * &i4b * (&i4a + &i4c) / &i3,
        ),
        (
            "∇1 I4b = I5b + I4b(I4a + I4c)/I3".to_string(),
            n1(&i4b) - &i5b - &i4b * (&i4a + &i4c) / &i3,
        ),
        (
            "∇2 I4b = I5c + (I4c² − I4a I4c + 2 I4b²)/I3 + I2 I3²".to_string(),
            n2(&i4b)
                - &i5c
                - (i4c.pow(2) - &i4a * &i4c + &two * i4b.pow(2)) / &i3
                - &i2 * i3.pow(2),
        ),
        (
            "∇1 I4c = I5c + 2(I4a I4c − I4b²)/I3".to_string(),
            n1(&i4c) - &i5c - &two * (&i4a * &i4c - i4b.pow(2)) / &i3,
        ),
        ("∇2 I4c = I5d".to_string(), n2(&i4c) - &i5d),
    ];
    let br = lie_bracket(&f.grad_k, &f.sgrad_k, f.metric.coord_names());
    let a = -(&two * &i4b) / &i3;
    let b = (&i4a - &i4c) / &i3;
    for c in 0..2 {
        let rhs = &a * &f.grad_k[c] + &b * &f.sgrad_k[c];
        out.push((
            format!("[grad K, sgrad K] component {}", c + 1),
            &br[c] - rhs,
        ));
    }
    out
}

/// Runs every identity through the zero tester. The commutator is reported
/// as one entry covering both components.
pub fn identity_suite(frame: &InvariantFrame, tester: &mut ZeroTester) -> IdentityReport {
    let i3 = frame.get("I3").cloned().unwrap_or_else(Expr::zero);
    if i3.is_zero() || tester.test(&i3).state == TriState::Zero {
        return IdentityReport {
            degenerate: true,
            results: Vec::new(),
        };
    }
    let mut results = Vec::new();
    let mut commutator: Option<IdentityResult> = None;
    for (name, r) in identity_residuals(frame) {
        let out = tester.test(&r);
        let witness = out.witness.as_ref().map(|(p, v)| format!("{p}: {v}"));
        let res = IdentityResult {
            name: name.clone(),
            state: out.state,
            witness,
            notes: out.notes,
        };
        if name.starts_with('[') {
            match &mut commutator {
                None => {
                    commutator = Some(IdentityResult {
                        name: "[grad K, sgrad K] = −(2 I4b/I3) grad K + ((I4a − I4c)/I3) sgrad K"
                            .into(),
                        ..res
                    });
                }
                Some(c) => {
                    if c.state == TriState::Zero && res.state != TriState::Zero {
                        c.state = res.state;
                        c.witness = res.witness;
                    }
                    c.notes.extend(res.notes);
                }
            }
        } else {
            results.push(res);
        }
    }
    results.extend(commutator);
    IdentityReport {
        degenerate: false,
        results,
    }
}
