//! The Koszul side of the computation: exterior-algebra indexing, Koszul
//! differentials restricted to a graded piece, linear-strand Betti numbers,
//! the top strand number as a subspace intersection, and the extraction of
//! special quadrics from intersection vectors together with the syzygy
//! identities they satisfy.

use crate::combinat::{binomial, subset_index, subsets};
use crate::exactfield::{FieldDesc, Matrix, Scalar};
use crate::ideal::{self, MonomialTable, Quadric};
use crate::projective::PointConfig;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KoszulError {
    #[error("exterior rank {k} out of range for n = {n}")]
    RankOutOfRange { k: usize, n: usize },
    #[error("component for subset {0:?} is not square-free")]
    NotSquareFree(Vec<usize>),
    #[error("component for subset {0:?} uses variables outside its triple")]
    BadSupport(Vec<usize>),
    #[error("component for subset {0:?} does not vanish on the configuration")]
    NotInIdeal(Vec<usize>),
    #[error("vector length {got} does not match the ambient space ({expected})")]
    BadVector { got: usize, expected: usize },
}

/// Matrix of the Koszul differential from exterior rank k, restricted to
/// total degree d. Domain basis: k-subsets (lex) x degree-(d-k) monomials
/// (graded lex); codomain likewise one rank lower. The sign convention is
/// delta(e_{j_1} ^ ... ^ e_{j_k}) = sum_l (-1)^(l+1) x_{j_l} e_{...no j_l...}.
pub fn koszul_delta(
    field: FieldDesc,
    n: usize,
    k: usize,
    d: u32,
) -> Result<Matrix, KoszulError> {
    if k < 1 || k > n + 1 {
        return Err(KoszulError::RankOutOfRange { k, n });
    }
    let nvars = n + 1;
    let cod_count = binomial(nvars, k - 1);
    if (d as usize) < k {
        // the graded piece is empty below degree k; the codomain piece may
        // still be nonzero when d = k - 1
        let cod_dim = if (d as usize) + 1 < k {
            0
        } else {
            cod_count * binomial(n + (d as usize + 1 - k), d as usize + 1 - k)
        };
        return Ok(Matrix::zero(field, cod_dim, 0));
    }
    let dom_monos = MonomialTable::new(nvars, d - k as u32);
    let cod_monos = MonomialTable::new(nvars, d + 1 - k as u32);
    let dom_subs = subsets(nvars, k);
    let dom_dim = dom_subs.len() * dom_monos.len();
    let cod_dim = cod_count * cod_monos.len();
    let mut m = Matrix::zero(field, cod_dim, dom_dim);
    let one = Scalar::one(field);
    for (si, sub) in dom_subs.iter().enumerate() {
        for (mi, mono) in dom_monos.monos.iter().enumerate() {
            let col = si * dom_monos.len() + mi;
            for (pos, &v) in sub.iter().enumerate() {
                let mut reduced: Vec<usize> = sub.clone();
                reduced.remove(pos);
                let ti = subset_index(nvars, &reduced);
                let mut exps = mono.exponents.clone();
                exps[v] += 1;
                let row = ti * cod_monos.len() + cod_monos.index_of(&exps);
                let sign = if pos % 2 == 0 { one.clone() } else { one.neg() };
                m.set(row, col, sign);
            }
        }
    }
    Ok(m)
}

/// The linear-strand Betti numbers a_1..a_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStrand {
    pub a: Vec<usize>,
}

impl LinearStrand {
    /// a_{n-1}, the multiplicity that drives the classification.
    pub fn a_top(&self) -> usize {
        self.a[self.a.len() - 2]
    }
}

fn block_diag(blocks: usize, m: &Matrix) -> Matrix {
    let mut out = Matrix::zero(m.field(), blocks * m.rows(), blocks * m.cols());
    for b in 0..blocks {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    out.set(b * m.rows() + i, b * m.cols() + j, v.clone());
                }
            }
        }
    }
    out
}

/// Strand Betti numbers computed as homology in each degree-(i+1) strand
/// piece of the Koszul complex tensored with the coordinate ring.
pub fn strand_betti(cfg: &PointConfig) -> LinearStrand {
    let n = cfg.n();
    let field = cfg.field();
    let eval2 = ideal::evaluation_matrix(cfg, 2).expect("degree 2 in range");
    let mut a = Vec::with_capacity(n);
    for i in 1..=n {
        // out-map: wedge^i V (x) R_1  ->  wedge^(i-1) V (x) R_2/I_2, realized
        // by composing with the (injective on the quotient) point evaluation
        let out_delta = koszul_delta(field, n, i, i as u32 + 1).unwrap();
        let eval_blocks = block_diag(binomial(n + 1, i - 1), &eval2);
        let composite = eval_blocks.mul(&out_delta).unwrap();
        let dom_dim = binomial(n + 1, i) * (n + 1);
        let ker_out = dom_dim - composite.rank();
        // in-map: wedge^(i+1) V (x) R_0 -> wedge^i V (x) R_1
        let in_delta = koszul_delta(field, n, i + 1, i as u32 + 1).unwrap();
        let rank_in = in_delta.rank();
        a.push(ker_out - rank_in);
    }
    let strand = LinearStrand { a };
    debug_assert!(
        {
            let mut ok = true;
            for w in strand.a.windows(2) {
                if w[0] == 0 && w[1] != 0 {
                    ok = false;
                }
            }
            ok
        },
        "strand vanishing must be monotone: {:?}",
        strand.a
    );
    strand
}

/// Dimension of the intersection of wedge^(n-2) V (x) I_2 with the kernel of
/// the Koszul differential in degree n, plus a canonical basis in ambient
/// coordinates ((n-2)-subset index x degree-2 monomial index).
pub fn a_top_via_intersection(cfg: &PointConfig) -> (usize, Vec<Vec<Scalar>>) {
    let n = cfg.n();
    let field = cfg.field();
    let i2 = ideal::ideal_degree_part(cfg, 2).unwrap();
    if i2.basis.is_empty() {
        return (0, Vec::new());
    }
    if n == 2 {
        // the differential out of exterior rank 0 vanishes in degree 2, so
        // the intersection is I_2 itself
        return (i2.basis.len(), i2.basis);
    }
    let nsubs = binomial(n + 1, n - 2);
    let q2 = binomial(n + 2, 2);
    let t = i2.basis.len();
    // columns parametrize (subset j, I_2 basis element); rows are ambient
    let mut ma = Matrix::zero(field, nsubs * q2, nsubs * t);
    for j in 0..nsubs {
        for (ti, b) in i2.basis.iter().enumerate() {
            for (mi, c) in b.iter().enumerate() {
                if !c.is_zero() {
                    ma.set(j * q2 + mi, j * t + ti, c.clone());
                }
            }
        }
    }
    let d = koszul_delta(field, n, n - 2, n as u32).unwrap();
    let constrained = d.mul(&ma).unwrap();
    let null = constrained.nullspace();
    let dim = null.len();
    let basis = null
        .into_iter()
        .map(|c| ma.mul_vec(&c).unwrap())
        .collect();
    (dim, basis)
}

/// A Koszul kernel element presented as its special quadrics: one
/// square-free quadric in three variables per (n-2)-subset.
#[derive(Debug, Clone, PartialEq)]
pub struct KoszulElement {
    pub n: usize,
    pub comps: BTreeMap<Vec<usize>, Quadric>,
}

impl KoszulElement {
    /// The component indexed by the complement triple a < b < c.
    pub fn f_triple(&self, a: usize, b: usize, c: usize) -> &Quadric {
        let triple = [a, b, c];
        let sub: Vec<usize> = (0..=self.n).filter(|v| !triple.contains(v)).collect();
        &self.comps[&sub]
    }

    /// Coefficients (lambda, mu, nu) of F_abc = lambda x_a x_b + mu x_a x_c
    /// + nu x_b x_c for a < b < c.
    pub fn triple_coeffs(&self, a: usize, b: usize, c: usize) -> (Scalar, Scalar, Scalar) {
        let f = self.f_triple(a, b, c);
        (
            f.pair_coeff(a, b).clone(),
            f.pair_coeff(a, c).clone(),
            f.pair_coeff(b, c).clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|q| q.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut comps = serde_json::Map::new();
        for (sub, q) in &self.comps {
            let key = serde_json::to_string(sub).unwrap();
            let coeffs: Vec<String> = q.coeffs.iter().map(|c| c.to_string()).collect();
            comps.insert(key, serde_json::json!(coeffs));
        }
        serde_json::json!({ "components": comps })
    }
}

/// Regroup a raw intersection vector into special quadrics, verifying the
/// square-free, support, and ideal-membership properties they must satisfy.
pub fn extract_special_quadrics(
    cfg: &PointConfig,
    alpha: &[Scalar],
) -> Result<KoszulElement, KoszulError> {
    let n = cfg.n();
    let nvars = n + 1;
    let q2 = binomial(n + 2, 2);
    let subs = subsets(nvars, n - 2);
    if alpha.len() != subs.len() * q2 {
        return Err(KoszulError::BadVector {
            got: alpha.len(),
            expected: subs.len() * q2,
        });
    }
    let mut comps = BTreeMap::new();
    for (si, sub) in subs.iter().enumerate() {
        let q = Quadric::from_coeffs(n, alpha[si * q2..(si + 1) * q2].to_vec());
        if !q.is_square_free() {
            return Err(KoszulError::NotSquareFree(sub.clone()));
        }
        let triple: Vec<usize> = (0..nvars).filter(|v| !sub.contains(v)).collect();
        if q.support().iter().any(|v| !triple.contains(v)) {
            return Err(KoszulError::BadSupport(sub.clone()));
        }
        if !ideal::quadric_vanishes(cfg, &q) {
            return Err(KoszulError::NotInIdeal(sub.clone()));
        }
        comps.insert(sub.clone(), q);
    }
    Ok(KoszulElement { n, comps })
}

/// The alternating cubic relation among the special quadrics: for every
/// a < b < c < d,
/// (-1)^a x_a F_bcd + (-1)^(b-1) x_b F_acd + (-1)^(c-2) x_c F_abd
/// + (-1)^(d-3) x_d F_abc = 0.
pub fn check_syzygy_relation(ke: &KoszulElement) -> bool {
    let n = ke.n;
    if n < 3 {
        return true;
    }
    let field = ke.comps.values().next().unwrap().field();
    let table3 = MonomialTable::new(n + 1, 3);
    for quad in subsets(n + 1, 4) {
        let (a, b, c, d) = (quad[0], quad[1], quad[2], quad[3]);
        let sign = |e: usize, shift: usize| -> Scalar {
            if (e + shift) % 2 == 0 {
                Scalar::one(field)
            } else {
                Scalar::one(field).neg()
            }
        };
        let mut acc = vec![Scalar::zero(field); table3.len()];
        let terms = [
            (a, ke.f_triple(b, c, d), sign(a, 0)),
            (b, ke.f_triple(a, c, d), sign(b, 1)),
            (c, ke.f_triple(a, b, d), sign(c, 2)),
            (d, ke.f_triple(a, b, c), sign(d, 3)),
        ];
        for (var, f, s) in terms {
            let cubic = f.times_var(var, &table3);
            for (i, v) in cubic.iter().enumerate() {
                if !v.is_zero() {
                    acc[i] = acc[i].add(&s.mul(v));
                }
            }
        }
        if acc.iter().any(|v| !v.is_zero()) {
            return false;
        }
    }
    true
}

/// The four signed scalar identities among the lambda/mu/nu coefficients of
/// the special quadrics, for every quadruple d < e < f < g.
pub fn coefficient_identities(ke: &KoszulElement) -> bool {
    if ke.n < 3 {
        return true;
    }
    subsets(ke.n + 1, 4)
        .into_iter()
        .all(|quad| coefficient_identities_at(ke, (quad[0], quad[1], quad[2], quad[3])))
}

/// The identities at one quadruple.
pub fn coefficient_identities_at(ke: &KoszulElement, quad: (usize, usize, usize, usize)) -> bool {
    let field = ke.comps.values().next().unwrap().field();
    let sgn = |e: usize, shift: usize| -> Scalar {
        if (e + shift) % 2 == 0 {
            Scalar::one(field)
        } else {
            Scalar::one(field).neg()
        }
    };
    let (d, e, f, g) = quad;
    let (l_efg, m_efg, n_efg) = ke.triple_coeffs(e, f, g);
    let (l_dfg, m_dfg, n_dfg) = ke.triple_coeffs(d, f, g);
    let (l_deg, m_deg, n_deg) = ke.triple_coeffs(d, e, g);
    let (l_def, m_def, n_def) = ke.triple_coeffs(d, e, f);
    let checks = [
        sgn(d, 0)
            .mul(&l_efg)
            .add(&sgn(e, 1).mul(&l_dfg))
            .add(&sgn(f, 2).mul(&l_deg)),
        sgn(d, 0)
            .mul(&m_efg)
            .add(&sgn(e, 1).mul(&m_dfg))
            .add(&sgn(g, 3).mul(&l_def)),
        sgn(d, 0)
            .mul(&n_efg)
            .add(&sgn(f, 2).mul(&m_deg))
            .add(&sgn(g, 3).mul(&m_def)),
        sgn(e, 1)
            .mul(&n_dfg)
            .add(&sgn(f, 2).mul(&n_deg))
            .add(&sgn(g, 3).mul(&n_def)),
    ];
    checks.iter().all(|v| v.is_zero())
}

/// Canonical Koszul element of a configuration with a nonzero top strand:
/// the first vector of the canonical intersection basis, regrouped.
pub fn canonical_element(cfg: &PointConfig) -> Option<Result<KoszulElement, KoszulError>> {
    let (dim, basis) = a_top_via_intersection(cfg);
    if dim == 0 {
        return None;
    }
    Some(extract_special_quadrics(cfg, &basis[0]))
}
