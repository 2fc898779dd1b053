//! End-to-end verification suites shared by the acceptance test target and
//! the CLI selftest command. Each criterion drives generated families
//! through the full pipeline and checks the published guarantees; the
//! suite runs at full scale in the tests and at reduced scale from the CLI.

use crate::classify::{self, classify, VerdictTag};
use crate::exactfield::{FieldDesc, Scalar, DEFAULT_PRIME};
use crate::harness::{self, generate, Family, GenSpec};
use crate::ideal;
use crate::koszul;
use crate::projective::{frame_transform, PointConfig};
use crate::split;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Full,
    Reduced,
}

impl Scale {
    fn cut(&self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Reduced => (full / 5).max(2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {} ({}): {} [{:.2}s] {}",
            self.index,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.details
        )
    }
}

fn fp() -> FieldDesc {
    FieldDesc::Fp { p: DEFAULT_PRIME }
}

fn report(
    index: usize,
    name: &'static str,
    started: Instant,
    pass: bool,
    details: String,
) -> CriterionReport {
    CriterionReport {
        index,
        name,
        pass,
        details,
        elapsed: started.elapsed(),
    }
}

/// Union shapes that sit in special position with the extra degeneracies the
/// converse test wants; all have at most 12 points so the bipartition oracle
/// stays in range.
const SPECIAL_UNION_SHAPES: &[(usize, usize, usize, usize, usize)] = &[
    (3, 1, 2, 2, 5),
    (3, 1, 2, 3, 4),
    (3, 1, 2, 4, 5),
    (4, 2, 2, 3, 5),
    (4, 2, 2, 4, 4),
    (4, 1, 3, 2, 6),
    (4, 1, 3, 3, 5),
    (5, 2, 3, 3, 7),
    (5, 2, 3, 4, 6),
    (5, 3, 2, 4, 6),
    (5, 1, 4, 2, 8),
    (5, 3, 2, 5, 5),
];

fn mixed_spec(t: usize) -> GenSpec {
    let n = 2 + t % 4;
    let seed = 910_000 + t as u64;
    let family = match (t / 4) % 4 {
        0 => Family::Rnc,
        1 => {
            let k = 1 + (t / 16) % (n - 1);
            let r = n - k;
            Family::UnionOfSubspaces { k, r, s_a: k + 1 + t % 2, s_b: r + 2 }
        }
        2 => Family::GeneralRandom,
        _ => Family::SpecialRandom { i: (t / 16) % (n - 1) },
    };
    let s = match family {
        Family::Rnc => n + 3 + t % 3,
        Family::UnionOfSubspaces { s_a, s_b, .. } => s_a + s_b,
        Family::GeneralRandom => n + 4,
        Family::SpecialRandom { .. } => n + 3,
    };
    GenSpec { family, n, s, field: fp(), seed }
}

/// Criterion 1: the two routes to the top strand number agree on mixed
/// families across dimensions, within the time budget.
pub fn criterion_1(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let trials = scale.cut(200);
    let mut done = 0;
    for t in 0..trials {
        let spec = mixed_spec(t);
        let cfg = match generate(&spec) {
            Ok((cfg, _)) => cfg,
            Err(e) => {
                return report(1, "formula agreement", started, false, format!("generation failed for {spec:?}: {e}"));
            }
        };
        let strand = koszul::strand_betti(&cfg);
        let (dim, _) = koszul::a_top_via_intersection(&cfg);
        if strand.a_top() != dim {
            return report(
                1,
                "formula agreement",
                started,
                false,
                format!("strand gives {}, intersection gives {dim} on {spec:?}", strand.a_top()),
            );
        }
        done += 1;
    }
    let elapsed = started.elapsed();
    let in_budget = scale != Scale::Full || elapsed < Duration::from_secs(60);
    report(
        1,
        "formula agreement",
        started,
        in_budget,
        format!("{done} configurations agreed{}", if in_budget { "" } else { "; over the 60 s budget" }),
    )
}

/// Criterion 2: curve families always classify onto a curve with a verified
/// witness and no fallback.
pub fn criterion_2(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let per_n = scale.cut(50);
    let mut done = 0;
    for n in 3..=5usize {
        for t in 0..per_n {
            let s = n + 3 + t % n; // n+3 .. 2n+2
            let spec = GenSpec { family: Family::Rnc, n, s, field: fp(), seed: 52_000 + (n * 1000 + t) as u64 };
            let cfg = match generate(&spec) {
                Ok((cfg, _)) => cfg,
                Err(e) => return report(2, "curve forward check", started, false, format!("{e}")),
            };
            let v = match classify(&cfg) {
                Ok(v) => v,
                Err(e) => return report(2, "curve forward check", started, false, format!("{e}")),
            };
            if v.strand.a_top() < 1 {
                return report(2, "curve forward check", started, false, format!("curve family with zero top strand: {spec:?}"));
            }
            let VerdictTag::OnRnc(w) = &v.tag else {
                return report(2, "curve forward check", started, false, format!("verdict {} on {spec:?}", v.tag_name()));
            };
            if let Err(e) = classify::verify_rnc_witness(&cfg, w) {
                return report(2, "curve forward check", started, false, e);
            }
            if v.used_fallback() {
                return report(2, "curve forward check", started, false, format!("fallback provenance on {spec:?}"));
            }
            done += 1;
        }
    }
    let elapsed = started.elapsed();
    let in_budget = scale != Scale::Full || elapsed < Duration::from_secs(60);
    report(2, "curve forward check", started, in_budget, format!("{done} curve configurations verified"))
}

/// Criterion 3: union families always classify onto a union whose witness
/// passes its invariants.
pub fn criterion_3(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let per_shape = scale.cut(50);
    let mut done = 0;
    for &(k, r) in &[(1usize, 2usize), (1, 3), (2, 2), (2, 3)] {
        let n = k + r;
        for t in 0..per_shape {
            let s_a = k + 1 + t % 3;
            let s_b = r + 2 + t % 2;
            let spec = GenSpec {
                family: Family::UnionOfSubspaces { k, r, s_a, s_b },
                n,
                s: s_a + s_b,
                field: fp(),
                seed: 53_000 + (n * 3100 + k * 501 + t) as u64,
            };
            let cfg = match generate(&spec) {
                Ok((cfg, _)) => cfg,
                Err(e) => return report(3, "union forward check", started, false, format!("{e}")),
            };
            let v = match classify(&cfg) {
                Ok(v) => v,
                Err(e) => return report(3, "union forward check", started, false, format!("{e}")),
            };
            if v.strand.a_top() < 1 {
                return report(3, "union forward check", started, false, format!("union family with zero top strand: {spec:?}"));
            }
            let VerdictTag::OnUnion(w) = &v.tag else {
                return report(3, "union forward check", started, false, format!("verdict {} on {spec:?}", v.tag_name()));
            };
            if let Err(e) = classify::verify_union_witness(&cfg, w) {
                return report(3, "union forward check", started, false, e);
            }
            done += 1;
        }
    }
    let elapsed = started.elapsed();
    let in_budget = scale != Scale::Full || elapsed < Duration::from_secs(60);
    report(3, "union forward check", started, in_budget, format!("{done} union configurations verified"))
}

/// Criterion 4: special-position configurations with planted union structure
/// classify constructively, and the bipartition oracle agrees on existence.
pub fn criterion_4(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let trials = scale.cut(100);
    let mut done = 0;
    for t in 0..trials {
        let (n, k, r, s_a, s_b) = SPECIAL_UNION_SHAPES[t % SPECIAL_UNION_SHAPES.len()];
        let spec = GenSpec {
            family: Family::UnionOfSubspaces { k, r, s_a, s_b },
            n,
            s: s_a + s_b,
            field: fp(),
            seed: 54_000 + t as u64,
        };
        let cfg = match generate(&spec) {
            Ok((cfg, _)) => cfg,
            Err(e) => return report(4, "converse at desk scale", started, false, format!("{e}")),
        };
        let v = match classify(&cfg) {
            Ok(v) => v,
            Err(e) => return report(4, "converse at desk scale", started, false, format!("{e}")),
        };
        if v.strand.a_top() == 0 {
            return report(4, "converse at desk scale", started, false, format!("planted union with zero top strand: {spec:?}"));
        }
        let VerdictTag::OnUnion(_) = &v.tag else {
            return report(4, "converse at desk scale", started, false, format!("verdict {} on {spec:?}", v.tag_name()));
        };
        if v.used_fallback() {
            return report(4, "converse at desk scale", started, false, format!("fallback provenance {:?} on {spec:?}", v.provenance));
        }
        if cfg.s() <= 12 {
            match harness::bipartition_oracle(&cfg) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    return report(4, "converse at desk scale", started, false, format!("oracle found no union on {spec:?}"));
                }
                Err(e) => return report(4, "converse at desk scale", started, false, format!("{e}")),
            }
        }
        done += 1;
    }
    report(4, "converse at desk scale", started, true, format!("{done} special unions classified constructively with oracle agreement"))
}

/// Criterion 5: the frozen rational fixture.
pub fn criterion_5(_scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let q = |v: i64| Scalar::from_i64(FieldDesc::Rational, v);
    let pts: Vec<Vec<Scalar>> = (0..8i64)
        .map(|t| vec![q(1), q(t), q(t * t), q(t * t * t)])
        .collect();
    let cfg = PointConfig::new(3, FieldDesc::Rational, pts).unwrap();
    let i2 = ideal::ideal_degree_part(&cfg, 2).unwrap().basis.len();
    if i2 != 3 {
        return report(5, "golden fixture", started, false, format!("dim I_2 = {i2}, expected 3"));
    }
    let strand = koszul::strand_betti(&cfg);
    if strand.a != vec![3, 2, 0] {
        return report(5, "golden fixture", started, false, format!("strand {:?}, expected [3, 2, 0]", strand.a));
    }
    let v = match classify(&cfg) {
        Ok(v) => v,
        Err(e) => return report(5, "golden fixture", started, false, format!("{e}")),
    };
    let VerdictTag::OnRnc(w) = &v.tag else {
        return report(5, "golden fixture", started, false, format!("verdict {}", v.tag_name()));
    };
    // the pencil parameters must be the negated inverted coordinates of the
    // point after the unit point, in the canonical frame
    let frame: Vec<usize> = (0..=3).collect();
    let (_, moved) = frame_transform(&cfg, &frame, Some(4)).unwrap();
    let qpt = moved.point(5);
    for l in 0..=3 {
        let expect = qpt.coords()[l].inv().unwrap().neg();
        if w.b[l] != expect {
            return report(5, "golden fixture", started, false, format!("b_{l} is not -1/q_{l}"));
        }
    }
    if let Err(e) = classify::verify_rnc_witness(&cfg, w) {
        return report(5, "golden fixture", started, false, e);
    }
    report(5, "golden fixture", started, true, "dim I_2 = 3, strand (3,2,0), curve witness from inverted coordinates".into())
}

/// Criterion 6: extracted elements satisfy the syzygy and coefficient
/// identities exactly; single-coefficient mutations break both.
pub fn criterion_6(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let trials = scale.cut(30);
    let mut checked = 0;
    let mut mutated = 0;
    for t in 0..trials {
        let (n, k, r, s_a, s_b) = SPECIAL_UNION_SHAPES[t % SPECIAL_UNION_SHAPES.len()];
        let spec = GenSpec {
            family: Family::UnionOfSubspaces { k, r, s_a, s_b },
            n,
            s: s_a + s_b,
            field: fp(),
            seed: 56_000 + t as u64,
        };
        let Ok((cfg, _)) = generate(&spec) else { continue };
        let Ok(crate::projective::Position::Special { i, witness }) =
            crate::projective::special_position_index(&cfg)
        else {
            continue;
        };
        let Ok((_, moved, _)) = classify::normalize_special(&cfg, i, &witness) else { continue };
        let (dim, basis) = koszul::a_top_via_intersection(&moved);
        if dim == 0 {
            continue;
        }
        for alpha in &basis {
            let ke = match koszul::extract_special_quadrics(&moved, alpha) {
                Ok(ke) => ke,
                Err(e) => return report(6, "syzygy identity suite", started, false, format!("extraction failed: {e}")),
            };
            if !koszul::check_syzygy_relation(&ke) || !koszul::coefficient_identities(&ke) {
                return report(6, "syzygy identity suite", started, false, format!("identities failed on {spec:?}"));
            }
            checked += 1;
            // mutation: bump one nonzero component coefficient by 1
            let mut broken = ke.clone();
            let Some(key) = broken
                .comps
                .iter()
                .find(|(_, q)| !q.is_zero())
                .map(|(k, _)| k.clone())
            else {
                continue;
            };
            let nvars = moved.n() + 1;
            let tri: Vec<usize> = (0..nvars).filter(|v| !key.contains(v)).collect();
            let qd = broken.comps.get_mut(&key).unwrap();
            let bumped = qd.pair_coeff(tri[0], tri[1]).add(&Scalar::one(fp()));
            qd.set_pair_coeff(tri[0], tri[1], bumped);
            if koszul::check_syzygy_relation(&broken) || koszul::coefficient_identities(&broken) {
                return report(6, "syzygy identity suite", started, false, "mutated element still passes".into());
            }
            mutated += 1;
        }
    }
    if checked == 0 {
        return report(6, "syzygy identity suite", started, false, "no elements were extracted".into());
    }
    report(6, "syzygy identity suite", started, true, format!("{checked} elements verified, {mutated} mutations rejected"))
}

/// Criterion 7: harvested split inputs with in-range dimension derive
/// constructive certificates that the independent checker accepts.
pub fn criterion_7(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let wanted = scale.cut(100);
    let shapes = [
        (5usize, 3usize, 2usize, 4usize, 6usize),
        (5, 3, 2, 4, 7),
        (5, 3, 2, 5, 5),
        (5, 2, 3, 3, 7),
        (5, 2, 3, 3, 8),
    ];
    let mut collected = 0;
    let mut seed = 57_000u64;
    let mut attempts = 0;
    while collected < wanted && attempts < 40 * wanted {
        attempts += 1;
        seed += 1;
        let (n, k, r, s_a, s_b) = shapes[attempts % shapes.len()];
        let spec = GenSpec {
            family: Family::UnionOfSubspaces { k, r, s_a, s_b },
            n,
            s: s_a + s_b,
            field: fp(),
            seed,
        };
        let Ok((cfg, _)) = generate(&spec) else { continue };
        for inp in harness::harvest_split_inputs(&cfg) {
            let d = inp.dim_v();
            if d == 0 || d >= inp.m() - 1 {
                continue;
            }
            let cert = match split::derive_certificate(&inp, false) {
                Ok(c) => c,
                Err(e) => {
                    return report(7, "split certificates", started, false, format!("constructive derivation failed: {e}"));
                }
            };
            if cert.provenance == split::Provenance::FallbackSearch {
                return report(7, "split certificates", started, false, "fallback provenance".into());
            }
            if cert.ls.len() + cert.hs.len() != inp.m() - 1 {
                return report(7, "split certificates", started, false, "count invariant failed".into());
            }
            if !split::check_certificate(&inp.cfg, &cert, &inp.spanning_forms()) {
                return report(7, "split certificates", started, false, "independent checker rejected a certificate".into());
            }
            collected += 1;
            if collected == wanted {
                break;
            }
        }
    }
    if collected < wanted {
        return report(7, "split certificates", started, false, format!("only harvested {collected} of {wanted} inputs"));
    }
    report(7, "split certificates", started, true, format!("{collected} certificates derived constructively and checked"))
}

/// Criterion 8: generic configurations rarely carry a strand; exceptions
/// still classify consistently.
pub fn criterion_8(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let trials = scale.cut(50);
    let mut zero = 0;
    let mut exceptions = 0;
    for t in 0..trials {
        let n = 3 + t % 3;
        let s = n + 4 + t % 2;
        let spec = GenSpec { family: Family::GeneralRandom, n, s, field: fp(), seed: 58_000 + t as u64 };
        let cfg = match generate(&spec) {
            Ok((cfg, _)) => cfg,
            Err(e) => return report(8, "negative control", started, false, format!("{e}")),
        };
        let v = match classify(&cfg) {
            Ok(v) => v,
            Err(e) => return report(8, "negative control", started, false, format!("{e}")),
        };
        if v.strand.a_top() == 0 {
            if !matches!(v.tag, VerdictTag::NoLinearStrand) {
                return report(8, "negative control", started, false, "zero strand with a nonzero verdict".into());
            }
            zero += 1;
        } else {
            exceptions += 1;
            let VerdictTag::OnRnc(w) = &v.tag else {
                return report(8, "negative control", started, false, format!("exception with verdict {}", v.tag_name()));
            };
            if let Err(e) = classify::verify_rnc_witness(&cfg, w) {
                return report(8, "negative control", started, false, e);
            }
        }
    }
    let threshold = (trials * 48).div_ceil(50);
    let pass = zero >= threshold;
    report(
        8,
        "negative control",
        started,
        pass,
        format!("{zero}/{trials} with zero top strand ({exceptions} verified exceptions)"),
    )
}

/// Criterion 9: strand numbers and verdict tags are invariant under random
/// frame transformations.
pub fn criterion_9(scale: Scale) -> CriterionReport {
    let started = Instant::now();
    let sample = scale.cut(20);
    let frames = scale.cut(10);
    let mut rng = ChaCha8Rng::seed_from_u64(59_000);
    let mut done = 0;
    for t in 0..sample {
        let spec = mixed_spec(t * 7 + 3);
        let cfg = match generate(&spec) {
            Ok((cfg, _)) => cfg,
            Err(e) => return report(9, "frame invariance", started, false, format!("{e}")),
        };
        let base = match classify(&cfg) {
            Ok(v) => v,
            Err(e) => return report(9, "frame invariance", started, false, format!("{e}")),
        };
        for _ in 0..frames {
            let n = cfg.n();
            let g = loop {
                let entries: Vec<Scalar> = (0..(n + 1) * (n + 1))
                    .map(|_| Scalar::from_i64(fp(), rng.gen_range(0..DEFAULT_PRIME as i64)))
                    .collect();
                let m = crate::exactfield::Matrix::new(fp(), n + 1, n + 1, entries).unwrap();
                if m.rank() == n + 1 {
                    break crate::projective::FrameMap::new(m).unwrap();
                }
            };
            let moved = g.apply_config(&cfg);
            let v = match classify(&moved) {
                Ok(v) => v,
                Err(e) => return report(9, "frame invariance", started, false, format!("{e}")),
            };
            if v.strand.a != base.strand.a {
                return report(9, "frame invariance", started, false, format!("strand changed under a frame on {spec:?}"));
            }
            if v.tag_name() != base.tag_name() {
                return report(9, "frame invariance", started, false, format!("verdict changed: {} vs {} on {spec:?}", v.tag_name(), base.tag_name()));
            }
        }
        done += 1;
    }
    report(9, "frame invariance", started, true, format!("{done} configurations stable under {frames} frames each"))
}

pub fn run_criterion(index: usize, scale: Scale) -> CriterionReport {
    match index {
        1 => criterion_1(scale),
        2 => criterion_2(scale),
        3 => criterion_3(scale),
        4 => criterion_4(scale),
        5 => criterion_5(scale),
        6 => criterion_6(scale),
        7 => criterion_7(scale),
        8 => criterion_8(scale),
        _ => criterion_9(scale),
    }
}

pub fn run_all(scale: Scale) -> Vec<CriterionReport> {
    (1..=9).map(|i| run_criterion(i, scale)).collect()
}
