//! Verification suites behind `nkgeo verify`.
//!
//! Each suite returns named [`Check`]s carrying the largest deviation seen
//! and the tolerance it is held to; a check passes iff `max_dev < tol`.
//! Predicate checks report a mismatch count against a tolerance of `0.5`.

use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesics::{canonical_velocity, GeodesicCase, GeodesicCurve, PEigenClass};
use crate::manifold::{
    almost_complex_j, almost_product_p, connection_table, frame_field, levi_civita,
    lie_bracket_frame, metric_euclidean, metric_g, nabla_j_table, product_q, tensor_g,
    FrameCombo, FrameIndex, NKTangent,
};
use crate::oracle::{
    compare_with_closed_form, conserved_c1_drift, epsilon_norm_conservation, geodesic_residual,
    integrate, speed_drift, IntegratorConfig,
};
use crate::quat::ImQuaternion;
use crate::sampling;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, max_dev: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            max_dev,
            tol,
            pass: max_dev < tol,
        }
    }

    fn mismatches(name: impl Into<String>, count: usize) -> Self {
        Self::new(name, count as f64, 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Tables,
    Oracle,
    Residual,
    Speed,
    Constants,
    Predicates,
    Closedness,
    Conservation,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Identities,
        Suite::Tables,
        Suite::Oracle,
        Suite::Residual,
        Suite::Speed,
        Suite::Constants,
        Suite::Predicates,
        Suite::Closedness,
        Suite::Conservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Tables => "tables",
            Suite::Oracle => "oracle",
            Suite::Residual => "residual",
            Suite::Speed => "speed",
            Suite::Constants => "constants",
            Suite::Predicates => "predicates",
            Suite::Closedness => "closedness",
            Suite::Conservation => "conservation",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{s}`")))
    }
}

/// A deliberately broken structure, used to show that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// `J` with the sign of its `U` term flipped in the second component.
    JSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "j-sign" => Ok(Fault::JSign),
            _ => Err(Error::InvalidInput(format!("unknown fault `{s}`"))),
        }
    }
}

impl Fault {
    fn j(self, z: &NKTangent) -> NKTangent {
        match self {
            Fault::None => almost_complex_j(z),
            Fault::JSign => {
                let (p, q) = (z.base.p.quat(), z.base.q.quat());
                let s = 1.0 / 3f64.sqrt();
                NKTangent {
                    base: z.base,
                    u: (p * q.conj() * z.v * 2.0 - z.u) * s,
                    v: (z.v + q * p.conj() * z.u * 2.0) * s,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random tangents per identity.
    pub tangents: usize,
    /// Random curves per geodesic case.
    pub curves_per_case: usize,
    pub max_denominator: u64,
    pub fault: Fault,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            tangents: 1000,
            curves_per_case: 10,
            max_denominator: tol::DEFAULT_MAX_DENOMINATOR,
            fault: Fault::None,
        }
    }
}

pub fn run(suites: &[Suite], opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &suite in suites {
        let checks = match suite {
            Suite::Identities => identities(opts),
            Suite::Tables => tables(opts),
            Suite::Oracle => oracle(opts)?,
            Suite::Residual => residual(opts)?,
            Suite::Speed => speed(opts)?,
            Suite::Constants => constants(opts),
            Suite::Predicates => predicates(opts)?,
            Suite::Closedness => closedness(opts)?,
            Suite::Conservation => conservation(opts)?,
        };
        out.extend(checks);
    }
    Ok(out)
}

/// Running maximum keyed by check name, in insertion order.
struct MaxTable(Vec<(&'static str, f64, f64)>);

impl MaxTable {
    fn new(entries: &[(&'static str, f64)]) -> Self {
        Self(entries.iter().map(|&(n, t)| (n, 0.0, t)).collect())
    }

    fn record(&mut self, name: &str, dev: f64) {
        let slot = self.0.iter_mut().find(|(n, _, _)| *n == name).expect(name);
        // NaN must surface as a failure
        slot.1 = if dev.is_nan() { f64::NAN } else { slot.1.max(dev) };
    }

    fn finish(self) -> Vec<Check> {
        self.0
            .into_iter()
            .map(|(n, d, t)| Check::new(n, if d.is_nan() { f64::INFINITY } else { d }, t))
            .collect()
    }
}

const IDENTITY_TOL: f64 = 1e-10;

fn identities(opts: &VerifyOptions) -> Vec<Check> {
    let j = |z: &NKTangent| opts.fault.j(z);
    let mut rng = sampling::seeded(opts.seed);
    let names = [
        "J^2 = -Id",
        "P^2 = Id",
        "PJ = -JP",
        "g(JZ,JZ') = g(Z,Z')",
        "g(PZ,PZ') = g(Z,Z')",
        "g(PZ,Z') = g(Z,PZ')",
        "G(X,Y) + G(Y,X) = 0",
        "G(X,JY) = -JG(X,Y)",
        "g(G(X,Y),Z) + g(G(X,Z),Y) = 0",
        "metric: Hermitian form = explicit form",
        "QZ = (2PJZ - JZ)/sqrt3",
        "PZ = (Z - sqrt3 QJZ)/2",
    ];
    let mut t = MaxTable::new(&names.map(|n| (n, IDENTITY_TOL)));
    let g = |a: &NKTangent, b: &NKTangent| metric_g(a, b).expect("same base");
    let tg = |a: &NKTangent, b: &NKTangent| tensor_g(a, b).expect("same base");
    let s3 = 3f64.sqrt();

    for _ in 0..opts.tangents {
        let at = sampling::point(&mut rng);
        let z = sampling::tangent_at(&mut rng, at, 1.0);
        let w = sampling::tangent_at(&mut rng, at, 1.0);
        let x = sampling::tangent_at(&mut rng, at, 1.0);
        let p = almost_product_p;

        t.record(names[0], j(&j(&z)).max_abs_diff(&-z));
        t.record(names[1], p(&p(&z)).max_abs_diff(&z));
        t.record(names[2], p(&j(&z)).max_abs_diff(&-j(&p(&z))));
        t.record(names[3], (g(&j(&z), &j(&w)) - g(&z, &w)).abs());
        t.record(names[4], (g(&p(&z), &p(&w)) - g(&z, &w)).abs());
        t.record(names[5], (g(&p(&z), &w) - g(&z, &p(&w))).abs());
        t.record(names[6], (tg(&z, &w) + tg(&w, &z)).euclidean_norm());
        t.record(names[7], tg(&z, &j(&w)).max_abs_diff(&-j(&tg(&z, &w))));
        t.record(names[8], (g(&tg(&z, &w), &x) + g(&tg(&z, &x), &w)).abs());
        let hermitian = 0.5
            * (metric_euclidean(&z, &w).expect("same base")
                + metric_euclidean(&j(&z), &j(&w)).expect("same base"));
        t.record(names[9], (hermitian - g(&z, &w)).abs());
        let qz = (p(&j(&z)) * 2.0 - j(&z)) * (1.0 / s3);
        t.record(names[10], qz.max_abs_diff(&product_q(&z)));
        let pz = (z - product_q(&j(&z)) * s3) * 0.5;
        t.record(names[11], pz.max_abs_diff(&p(&z)));
    }
    t.finish()
}

fn tables(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = sampling::seeded(opts.seed ^ 0x7AB1E5);
    let mut table_dev = 0.0_f64;
    for _ in 0..100 {
        let at = sampling::point(&mut rng);
        for a in FrameIndex::ALL {
            for b in FrameIndex::ALL {
                let g = tensor_g(&frame_field(a, &at), &frame_field(b, &at)).expect("same base");
                table_dev = table_dev.max(g.max_abs_diff(&nabla_j_table(a, b).to_tangent(&at)));
            }
        }
    }

    let mut bracket_dev = 0.0_f64;
    let mut torsion_dev = 0.0_f64;
    for a in FrameIndex::ALL {
        for b in FrameIndex::ALL {
            let expected = if a.family() == b.family() {
                (1..=3u8).fold(FrameCombo::ZERO, |acc, k| {
                    let idx = FrameIndex::new(a.family(), k).expect("index in range");
                    acc + FrameCombo::single(idx, -2.0 * levi_civita(a.index(), b.index(), k) as f64)
                })
            } else {
                FrameCombo::ZERO
            };
            let bracket = lie_bracket_frame(a, b);
            bracket_dev = bracket_dev.max(bracket.max_abs_diff(&expected));
            let torsion = connection_table(a, b) - connection_table(b, a) - bracket;
            torsion_dev = torsion_dev.max(torsion.max_abs_diff(&FrameCombo::ZERO));
        }
    }

    vec![
        Check::new("G on frame pairs = nabla J table", table_dev, 1e-12),
        // exact equality: anything nonzero fails
        Check::new("frame brackets = -2 eps_ijk", bracket_dev, f64::MIN_POSITIVE),
        Check::new("connection table is torsion-free", torsion_dev, 1e-14),
    ]
}

const CASES: [GeodesicCase; 3] = [GeodesicCase::Case1, GeodesicCase::Case2, GeodesicCase::Case3];

fn curves(opts: &VerifyOptions, salt: u64) -> Result<Vec<GeodesicCurve>> {
    let mut rng = sampling::seeded(opts.seed.wrapping_add(salt));
    let mut out = Vec::new();
    for case in CASES {
        for _ in 0..opts.curves_per_case {
            out.push(GeodesicCurve::new(&sampling::velocity_in_case(&mut rng, case, 1.0))?);
        }
    }
    Ok(out)
}

fn oracle(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut devs = [0.0_f64; 3];
    let cfg = IntegratorConfig::new(10.0);
    for curve in curves(opts, 1)? {
        let slot = CASES.iter().position(|&c| c == curve.case()).unwrap_or(2);
        devs[slot] = devs[slot].max(compare_with_closed_form(&curve, &cfg)?);
    }
    Ok(CASES
        .iter()
        .zip(devs)
        .map(|(c, d)| Check::new(format!("closed form vs RK4 ({c})"), d, 1e-6))
        .collect())
}

fn residual(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut dev = 0.0_f64;
    for curve in curves(opts, 2)? {
        for k in 0..10 {
            dev = dev.max(geodesic_residual(&curve, 0.37 + k as f64, tol::FD_STEP)?);
        }
    }
    Ok(vec![Check::new("geodesic equation residual", dev, 1e-5)])
}

fn speed(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut constant = 0.0_f64;
    let mut formula = 0.0_f64;
    let mut unit = 0.0_f64;
    for curve in curves(opts, 3)? {
        for k in 0..20 {
            let v = curve.eval_velocity(0.5 * k as f64);
            constant = constant.max((metric_g(&v, &v)?.sqrt() - curve.speed).abs());
        }
        formula = formula.max((curve.params.speed_squared().sqrt() - curve.speed).abs());
        let u = curve.arclength_reparam()?;
        for k in 0..5 {
            let v = u.eval_velocity(k as f64);
            unit = unit.max((metric_g(&v, &v)?.sqrt() - 1.0).abs());
        }
    }
    Ok(vec![
        Check::new("speed constant along curve", constant, 1e-10),
        Check::new("speed = sqrt((1/3 + d1^2)|c1|^2 + |c2|^2)", formula, 1e-10),
        Check::new("arclength reparametrization has unit speed", unit, 1e-10),
    ])
}

fn constants(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = sampling::seeded(opts.seed.wrapping_add(4));
    let names = ["A + B = c", "AB = ac - a^2 - b^2", "b phi^2 - (c - 2a) phi - b = 0", "theta form = phi form"];
    let mut t = MaxTable::new(&names.map(|n| (n, 1e-12)));
    for _ in 0..100 {
        let v = sampling::velocity_in_case(&mut rng, GeodesicCase::Case3, 1.0);
        let Ok(curve) = GeodesicCurve::new(&v) else { continue };
        for f in [curve.params.first, curve.params.second] {
            let (a, b, c) = (f.axial, f.transverse, f.rate);
            t.record(names[0], (f.freq_hi + f.freq_lo - c).abs());
            t.record(names[1], (f.freq_hi * f.freq_lo - (a * c - a * a - b * b)).abs());
            t.record(names[2], (b * f.mix * f.mix - (c - 2.0 * a) * f.mix - b).abs());
            for k in 0..10 {
                let s = k as f64;
                t.record(names[3], f.path(s).max_abs_diff(f.path_theta_form(s)));
            }
        }
    }
    t.finish()
}

/// Largest change of the left-trivialized velocity `α` along an RK4 run.
fn alpha_drift(curve: &GeodesicCurve) -> Result<f64> {
    let trace = integrate(&curve.eval_velocity(0.0), &IntegratorConfig::new(5.0))?;
    let a0 = trace.states[0].alpha;
    Ok(trace
        .states
        .iter()
        .map(|s| (s.alpha - a0).norm())
        .fold(0.0, f64::max))
}

fn predicates(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut euclid_mismatch = 0;
    let mut eigen_dev = 0.0_f64;
    let mut eigen_mismatch = 0;
    let mut rng = sampling::seeded(opts.seed.wrapping_add(5));
    let mut all = curves(opts, 5)?;
    // P-eigenvalue +1 needs d₁ = 0, which random Case2 data never hits.
    for _ in 0..opts.curves_per_case {
        let c1 = rng.random_range(0.2..2.0);
        all.push(GeodesicCurve::new(&canonical_velocity(c1, 0.0, 0.0))?);
    }
    for curve in &all {
        let measured_const = alpha_drift(curve)? < 1e-8;
        if measured_const != curve.params.is_euclidean_geodesic() {
            euclid_mismatch += 1;
        }
        let class = curve.params.p_eigenvector_class();
        for k in 0..10 {
            let v = curve.eval_velocity(0.7 * k as f64);
            let pv = almost_product_p(&v);
            let (minus, plus) = (pv.max_abs_diff(&-v), pv.max_abs_diff(&v));
            match class {
                PEigenClass::MinusOne => eigen_dev = eigen_dev.max(minus),
                PEigenClass::PlusOne => eigen_dev = eigen_dev.max(plus),
                PEigenClass::Neither => {
                    if minus < 1e-9 || plus < 1e-9 {
                        eigen_mismatch += 1;
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::mismatches("Euclidean-geodesic predicate vs measured alpha drift", euclid_mismatch),
        Check::new("P gamma' = +-gamma' for predicted class", eigen_dev, 1e-9),
        Check::mismatches("P-eigenvector predicate vs measurement (Neither)", eigen_mismatch),
    ])
}

/// Velocity at `(1, 1)` with `B/A = 1/3` and `B̃/Ã = 1/7`.
///
/// With `c = 1` (so `‖c₁‖ = 3/2`) and `u = 2a − c`, the first factor needs
/// `u² + 4b² = 1/4` and the second `(1 − u)² + 4b² = 9/16`; hence
/// `u = 11/32`, `4b² = 135/1024`, `a = 43/64`, `d₁ = −5/48`.
pub fn tuned_case3_velocity() -> NKTangent {
    canonical_velocity(1.5, -5.0 / 48.0, 135f64.sqrt() / 32.0)
}

fn closedness(opts: &VerifyOptions) -> Result<Vec<Check>> {
    use std::f64::consts::TAU;
    let cap = opts.max_denominator;
    let at_id = |a: ImQuaternion, b: ImQuaternion| {
        GeodesicCurve::new(&NKTangent::from_trivialized(crate::manifold::NKPoint::IDENTITY, a, b))
    };
    let case1 = at_id(ImQuaternion::I, -ImQuaternion::I)?.closedness(cap);
    let case1_dev = case1.period.map_or(f64::INFINITY, |p| (p - TAU).abs());
    let two = at_id(ImQuaternion::I * 2.0, ImQuaternion::I)?.closedness(cap);
    let root2 = at_id(ImQuaternion::I * 2f64.sqrt(), ImQuaternion::I)?.closedness(10_000);
    let tuned_curve = GeodesicCurve::new(&tuned_case3_velocity())?;
    let tuned = tuned_curve.closedness(cap);
    let return_dev = match tuned.period {
        Some(period) => tuned_curve.eval(period).distance(&tuned_curve.start()),
        None => f64::INFINITY,
    };
    Ok(vec![
        Check::new("Case1 a=1 period = 2 pi", case1_dev, 1e-9),
        Check::mismatches("Case2 a/a~ = 2 is closed", usize::from(!two.is_closed())),
        Check::mismatches("Case2 a/a~ = sqrt2 is open at cap 1e4", usize::from(root2.is_closed())),
        Check::mismatches("Case3 B/A = 1/3, B~/A~ = 1/7 is closed", usize::from(!tuned.is_closed())),
        Check::new("Case3 tuned curve returns after one period", return_dev, 1e-8),
    ])
}

fn conservation(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut c1 = 0.0_f64;
    let mut axial = 0.0_f64;
    let mut eps = 0.0_f64;
    let mut speed = 0.0_f64;
    let cfg = IntegratorConfig::new(10.0);
    for curve in curves(opts, 6)? {
        let trace = integrate(&curve.eval_velocity(0.0), &cfg)?;
        c1 = c1.max(conserved_c1_drift(&trace.states)?);
        speed = speed.max(speed_drift(&trace)?);
        if curve.case() != GeodesicCase::Case1 {
            let d = epsilon_norm_conservation(&trace.states)?;
            axial = axial.max(d.axial);
            eps = eps.max(d.norm);
        }
    }

    let mut rng = sampling::seeded(opts.seed.wrapping_add(7));
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..3 {
        let curve = GeodesicCurve::new(&sampling::velocity_in_case(&mut rng, GeodesicCase::Case3, 1.0))?;
        let coarse = compare_with_closed_form(&curve, &IntegratorConfig::new(10.0).with_step(0.02))?;
        let fine = compare_with_closed_form(&curve, &IntegratorConfig::new(10.0).with_step(0.01))?;
        worst_ratio = worst_ratio.min(coarse / fine);
    }

    Ok(vec![
        Check::new("c1 drift", c1, 1e-8),
        Check::new("<alpha - beta, c1> drift", axial, 1e-8),
        Check::new("|epsilon| drift", eps, 1e-8),
        Check::new("speed drift along RK4 trajectory", speed, 1e-8),
        Check::new("RK4 step-halving error ratio (inverse)", 1.0 / worst_ratio, 1.0 / 12.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            tangents: 50,
            curves_per_case: 2,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn clean_structures_pass() {
        let checks = run(&[Suite::Identities, Suite::Tables, Suite::Closedness], &quick()).unwrap();
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn injected_j_fault_is_caught() {
        let opts = VerifyOptions {
            fault: Fault::JSign,
            ..quick()
        };
        let checks = run(&[Suite::Identities], &opts).unwrap();
        let pj = checks.iter().find(|c| c.name == "PJ = -JP").unwrap();
        assert!(!pj.pass);
        assert!(checks.iter().any(|c| c.name == "J^2 = -Id" && !c.pass));
    }
}
