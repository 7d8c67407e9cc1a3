//! Discharging with exact rational charges.
//!
//! Every vertex starts with 5 − deg. Stage 1 moves charge from vertices of
//! degree ≤ 4 to their degree-5 neighbours; stage 2 averages the charge
//! over each kernel. A lower bound c on every final charge gives
//! 5n − 2e ≥ cn, i.e. e/n ≤ (5 − c)/2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::audit::Context;
use crate::error::{Error, Result};
use crate::format::{ser_rational, ser_rationals};
use crate::graph::PennyGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Weak,
    Main,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Variant {
    /// Charge sent per edge: 1/5 (weak) or 2/9 (main).
    pub fn default_q(self) -> BigRational {
        match self {
            Variant::Weak => ratio(1, 5),
            Variant::Main => ratio(2, 9),
        }
    }

    /// Density implied by a minimum final charge q: (5 − q)/2.
    pub fn density_bound(q: &BigRational) -> BigRational {
        (ratio(5, 1) - q) / ratio(2, 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    #[serde(serialize_with = "ser_rational")]
    pub amount: BigRational,
    pub stage: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChargeLedger {
    pub variant: Variant,
    #[serde(serialize_with = "ser_rational")]
    pub q: BigRational,
    #[serde(serialize_with = "ser_rationals")]
    pub initial: Vec<BigRational>,
    #[serde(serialize_with = "ser_rationals")]
    pub after_stage1: Vec<BigRational>,
    #[serde(serialize_with = "ser_rationals", rename = "final")]
    pub final_charges: Vec<BigRational>,
    pub transfers: Vec<Transfer>,
    /// Kernels used in stage 2, as (L, U, R, D).
    pub kernels: Vec<[usize; 4]>,
}

fn sum(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |acc, x| acc + x)
}

impl ChargeLedger {
    pub fn total_initial(&self) -> BigRational {
        sum(&self.initial)
    }

    pub fn conserved(&self) -> bool {
        let t = self.total_initial();
        sum(&self.after_stage1) == t && sum(&self.final_charges) == t
    }

    pub fn min_final(&self) -> Option<&BigRational> {
        self.final_charges.iter().min()
    }
}

/// ch(A) = 5 − deg(A), with no transfers yet.
pub fn initial_charges(g: &PennyGraph) -> ChargeLedger {
    let initial: Vec<BigRational> = (0..g.n()).map(|v| ratio(5 - g.degree(v) as i64, 1)).collect();
    ChargeLedger {
        variant: Variant::Main,
        q: Variant::Main.default_q(),
        after_stage1: initial.clone(),
        final_charges: initial.clone(),
        initial,
        transfers: Vec::new(),
        kernels: Vec::new(),
    }
}

pub fn run_discharging(g: &PennyGraph, variant: Variant) -> Result<ChargeLedger> {
    run_discharging_with(g, variant, &variant.default_q())
}

pub fn run_discharging_with(g: &PennyGraph, variant: Variant, q: &BigRational) -> Result<ChargeLedger> {
    let gp = g.general_position();
    if !gp.holds() {
        return Err(Error::HypothesesUnmet(format!(
            "general position fails ({} collinear triples)",
            gp.collinear_triples.len()
        )));
    }
    let ctx = Context::new(g);
    let mut ledger = initial_charges(g);
    ledger.variant = variant;
    ledger.q = q.clone();
    let half = q / ratio(2, 1);

    let mut charge = ledger.initial.clone();
    for a in 0..g.n() {
        if g.degree(a) > 4 {
            continue;
        }
        for &b in g.neighbors(a) {
            if g.degree(b) != 5 {
                continue;
            }
            let amount = match variant {
                Variant::Weak => q.clone(),
                Variant::Main => {
                    let alone = g.neighbors(b).iter().all(|&w| w == a || g.degree(w) > 4);
                    if ctx.in_kernel(b) || alone {
                        q.clone()
                    } else {
                        half.clone()
                    }
                }
            };
            charge[a] -= &amount;
            charge[b] += &amount;
            ledger.transfers.push(Transfer {
                from: a,
                to: b,
                amount,
                stage: 1,
            });
        }
    }
    ledger.after_stage1 = charge.clone();

    // kernels are sorted by vertex set; each member hands a quarter of its
    // charge to every other member
    for k in &ctx.kernels {
        let members = k.vertices();
        let share: Vec<BigRational> = members.iter().map(|&v| &charge[v] / ratio(4, 1)).collect();
        for (i, &from) in members.iter().enumerate() {
            for &to in &members {
                if to != from && !share[i].is_zero() {
                    ledger.transfers.push(Transfer {
                        from,
                        to,
                        amount: share[i].clone(),
                        stage: 2,
                    });
                }
            }
        }
        let avg = share.iter().fold(BigRational::zero(), |acc, s| acc + s);
        for &v in &members {
            charge[v] = avg.clone();
        }
        ledger.kernels.push(members);
    }
    ledger.final_charges = charge;
    Ok(ledger)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityVerdict {
    pub variant: Variant,
    pub vertices: usize,
    pub edges: usize,
    #[serde(serialize_with = "ser_rational")]
    pub density: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub density_bound: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub charge_threshold: BigRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_final_charge: Option<MinCharge>,
    pub conserved: Option<bool>,
    /// Σ initial = 5n − 2e
    pub degree_sum_identity: Option<bool>,
    pub negative_charges: usize,
    pub min_charge_ok: Option<bool>,
    pub density_ok: bool,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinCharge {
    pub vertex: usize,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

impl DensityVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == "pass" || self.verdict.starts_with("not applicable")
    }
}

fn base_verdict(g: &PennyGraph, variant: Variant, q: &BigRational) -> DensityVerdict {
    let n = g.n().max(1) as i64;
    let density = ratio(g.e() as i64, n);
    let bound = Variant::density_bound(q);
    DensityVerdict {
        variant,
        vertices: g.n(),
        edges: g.e(),
        density_ok: density <= bound,
        density,
        density_bound: bound,
        charge_threshold: q.clone(),
        min_final_charge: None,
        conserved: None,
        degree_sum_identity: None,
        negative_charges: 0,
        min_charge_ok: None,
        verdict: String::new(),
    }
}

/// Checks a ledger from `run_discharging` against the threshold q.
pub fn verify_density_bound(g: &PennyGraph, ledger: &ChargeLedger) -> DensityVerdict {
    let q = &ledger.q;
    let mut v = base_verdict(g, ledger.variant, q);
    let min = ledger
        .final_charges
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(vertex, value)| MinCharge {
            vertex,
            value: value.clone(),
        });
    let identity = ledger.total_initial() == ratio(5 * g.n() as i64 - 2 * g.e() as i64, 1);
    let min_ok = min.as_ref().is_none_or(|m| &m.value >= q);
    v.negative_charges = ledger.final_charges.iter().filter(|c| c.is_negative()).count();
    v.conserved = Some(ledger.conserved());
    v.degree_sum_identity = Some(identity);
    v.min_charge_ok = Some(min_ok);
    v.min_final_charge = min;
    v.verdict = if min_ok && v.density_ok && identity && ledger.conserved() {
        "pass".into()
    } else {
        "fail".into()
    };
    v
}

/// Runs discharging where its hypotheses hold; otherwise reports the exact
/// density with a "not applicable" verdict.
pub fn discharge_report(g: &PennyGraph, variant: Variant, q: &BigRational) -> (Option<ChargeLedger>, DensityVerdict) {
    match run_discharging_with(g, variant, q) {
        Ok(ledger) => {
            let v = verify_density_bound(g, &ledger);
            (Some(ledger), v)
        }
        Err(e) => {
            let mut v = base_verdict(g, variant, q);
            v.verdict = match e {
                Error::HypothesesUnmet(_) => "not applicable: general position fails".into(),
                other => format!("not applicable: {other}"),
            };
            (None, v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_hex_lattice, lattice_point};
    use crate::graph::build_penny_graph;

    fn triangle() -> PennyGraph {
        build_penny_graph(vec![lattice_point(0, 0), lattice_point(1, 0), lattice_point(0, 1)]).unwrap()
    }

    #[test]
    fn initial_charge_examples() {
        let l = initial_charges(&triangle());
        assert_eq!(l.initial, vec![ratio(3, 1); 3]);
        assert_eq!(l.total_initial(), ratio(9, 1));

        let hex = build_penny_graph(gen_hex_lattice(1)).unwrap();
        let l = initial_charges(&hex);
        let center = (0..hex.n()).find(|&v| hex.degree(v) == 6).unwrap();
        assert_eq!(l.initial[center], ratio(-1, 1));
        assert_eq!(l.total_initial(), ratio(11, 1));
    }

    #[test]
    fn triangle_keeps_its_charge() {
        for variant in [Variant::Weak, Variant::Main] {
            let g = triangle();
            let l = run_discharging(&g, variant).unwrap();
            assert_eq!(l.final_charges, l.initial);
            assert!(l.transfers.is_empty());
            let v = verify_density_bound(&g, &l);
            assert_eq!(v.density, ratio(1, 1));
            assert_eq!(v.verdict, "pass");
        }
    }

    #[test]
    fn lattice_is_not_applicable() {
        let g = build_penny_graph(gen_hex_lattice(1)).unwrap();
        assert!(matches!(run_discharging(&g, Variant::Main), Err(Error::HypothesesUnmet(_))));
        let (ledger, v) = discharge_report(&g, Variant::Main, &Variant::Main.default_q());
        assert!(ledger.is_none());
        assert_eq!(v.density, ratio(12, 7));
        assert_eq!(v.verdict, "not applicable: general position fails");
    }

    #[test]
    fn balancing_equations_pick_the_presets() {
        // weak: a degree-4 vertex sending q to four neighbours keeps 1 − 4q
        let q = Variant::Weak.default_q();
        assert_eq!(ratio(1, 1) - ratio(4, 1) * &q, q);
        // main: 1 − 7q/2 = q
        let q = Variant::Main.default_q();
        assert_eq!(ratio(1, 1) - ratio(7, 2) * &q, q);
        assert_eq!(Variant::density_bound(&Variant::Main.default_q()), ratio(43, 18));
        assert_eq!(Variant::density_bound(&Variant::Weak.default_q()), ratio(12, 5));
    }

    #[test]
    fn star_sends_half_shares_when_contested() {
        // pendant path: degree-5 hub with two degree-1 leaves among its
        // neighbours gets q/2 from each in the main variant
        let coords = vec![[0.0, 0.0], [1.0, 0.0], [0.31, 0.95], [-0.81, 0.59], [-0.81, -0.59], [0.31, -0.95]];
        let g = PennyGraph::declared(coords, (1..6).map(|i| (0, i)).collect()).unwrap();
        let l = run_discharging(&g, Variant::Main).unwrap();
        assert!(l.conserved());
        assert!(l.transfers.iter().all(|t| t.amount == ratio(1, 9)));
        assert_eq!(l.final_charges[0], ratio(5, 9));
        let w = run_discharging(&g, Variant::Weak).unwrap();
        assert_eq!(w.final_charges[0], ratio(1, 1));
    }
}
