//! Degree-d evaluation matrices, the Hilbert function, the quadric space
//! I_2, linear and quadratic form algebra, product-vanishing checks, and
//! factorization of low-rank quadrics into linear forms.

use crate::combinat::{binomial, monomial_exponents};
use crate::exactfield::{FieldDesc, Matrix, Scalar};
use crate::projective::{FrameMap, PointConfig, ProjPoint};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("degree must be between 1 and {max}, got {got}")]
    DegreeCap { got: u32, max: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the zero quadric cannot be factored")]
    ZeroQuadric,
}

/// Highest degree the evaluation machinery serves; 1 and 2 carry the
/// pipeline, 3 and 4 back the cubic syzygy checks.
pub const MAX_DEGREE: u32 = 4;

/// A monomial as an exponent vector; the global order is graded lex with
/// x_0 > x_1 > ... > x_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval(&self, point: &ProjPoint, field: FieldDesc) -> Scalar {
        let mut acc = Scalar::one(field);
        for (c, &e) in point.coords().iter().zip(&self.exponents) {
            for _ in 0..e {
                acc = acc.mul(c);
            }
        }
        acc
    }
}

/// The degree-d monomial basis in the global order.
pub fn monomial_basis(nvars: usize, d: u32) -> Vec<Monomial> {
    monomial_exponents(nvars, d)
        .into_iter()
        .map(|exponents| Monomial { exponents })
        .collect()
}

/// Index of x_a * x_b (a <= b) in the degree-2 basis.
pub fn pair_index(nvars: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    // monomials with first variable a' < a come first
    let mut idx = 0;
    for ap in 0..a {
        idx += nvars - ap;
    }
    idx + (b - a)
}

/// A linear form as a coefficient vector over x_0..x_n.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn zero(field: FieldDesc, nvars: usize) -> LinearForm {
        LinearForm {
            coeffs: vec![Scalar::zero(field); nvars],
        }
    }

    pub fn var(field: FieldDesc, nvars: usize, i: usize) -> LinearForm {
        let mut f = LinearForm::zero(field, nvars);
        f.coeffs[i] = Scalar::one(field);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, point: &ProjPoint) -> Scalar {
        let field = self.coeffs[0].field();
        let mut acc = Scalar::zero(field);
        for (c, x) in self.coeffs.iter().zip(point.coords()) {
            if !c.is_zero() && !x.is_zero() {
                acc = acc.add(&c.mul(x));
            }
        }
        acc
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// The pullback f(g x): coefficients become g^T * coeffs.
    pub fn compose(&self, map: &FrameMap) -> LinearForm {
        LinearForm {
            coeffs: map.matrix().transpose().mul_vec(&self.coeffs).unwrap(),
        }
    }

    /// Product with another linear form, as a quadric.
    pub fn mul_linear(&self, other: &LinearForm) -> Quadric {
        let nvars = self.coeffs.len();
        let field = self.coeffs[0].field();
        let mut q = Quadric::zero(field, nvars - 1);
        for a in 0..nvars {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..nvars {
                if other.coeffs[b].is_zero() {
                    continue;
                }
                let idx = pair_index(nvars, a, b);
                let cur = q.coeffs[idx].add(&self.coeffs[a].mul(&other.coeffs[b]));
                q.coeffs[idx] = cur;
            }
        }
        q
    }
}

/// A quadric as a coefficient vector over the degree-2 monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadric {
    pub n: usize,
    pub coeffs: Vec<Scalar>,
}

impl Quadric {
    pub fn zero(field: FieldDesc, n: usize) -> Quadric {
        Quadric {
            n,
            coeffs: vec![Scalar::zero(field); binomial(n + 2, 2)],
        }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Scalar>) -> Quadric {
        assert_eq!(coeffs.len(), binomial(n + 2, 2));
        Quadric { n, coeffs }
    }

    pub fn field(&self) -> FieldDesc {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of x_a * x_b.
    pub fn pair_coeff(&self, a: usize, b: usize) -> &Scalar {
        &self.coeffs[pair_index(self.n + 1, a, b)]
    }

    pub fn set_pair_coeff(&mut self, a: usize, b: usize, v: Scalar) {
        let idx = pair_index(self.n + 1, a, b);
        self.coeffs[idx] = v;
    }

    pub fn eval(&self, point: &ProjPoint) -> Scalar {
        let field = self.field();
        let mut acc = Scalar::zero(field);
        let mut idx = 0;
        for a in 0..=self.n {
            for b in a..=self.n {
                let c = &self.coeffs[idx];
                idx += 1;
                if c.is_zero() {
                    continue;
                }
                let pa = &point.coords()[a];
                let pb = &point.coords()[b];
                if pa.is_zero() || pb.is_zero() {
                    continue;
                }
                acc = acc.add(&c.mul(&pa.mul(pb)));
            }
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Quadric {
        Quadric {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn add(&self, other: &Quadric) -> Quadric {
        Quadric {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Quadric {
        Quadric {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Quadric) -> Quadric {
        self.add(&other.neg())
    }

    /// True when no square monomial has a nonzero coefficient.
    pub fn is_square_free(&self) -> bool {
        (0..=self.n).all(|a| self.pair_coeff(a, a).is_zero())
    }

    /// Variables occurring in the quadric.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.n + 1];
        for a in 0..=self.n {
            for b in a..=self.n {
                if !self.pair_coeff(a, b).is_zero() {
                    used[a] = true;
                    used[b] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    /// The pullback q(g x).
    pub fn compose(&self, map: &FrameMap) -> Quadric {
        let field = self.field();
        let g = map.matrix();
        let mut out = Quadric::zero(field, self.n);
        // substitute x_a -> sum_r g[a][r] x_r in each monomial
        for a in 0..=self.n {
            for b in a..=self.n {
                let c = self.pair_coeff(a, b).clone();
                if c.is_zero() {
                    continue;
                }
                for r in 0..=self.n {
                    let ga = g.get(a, r);
                    if ga.is_zero() {
                        continue;
                    }
                    for t in 0..=self.n {
                        let gb = g.get(b, t);
                        if gb.is_zero() {
                            continue;
                        }
                        let idx = pair_index(self.n + 1, r, t);
                        let cur = out.coeffs[idx].add(&c.mul(&ga.mul(gb)));
                        out.coeffs[idx] = cur;
                    }
                }
            }
        }
        out
    }

    /// Multiply by the variable x_l, returning a degree-3 coefficient vector
    /// over the cubic basis described by `table`.
    pub fn times_var(&self, l: usize, table: &MonomialTable) -> Vec<Scalar> {
        assert_eq!(table.degree, 3);
        let field = self.field();
        let mut out = vec![Scalar::zero(field); table.len()];
        for a in 0..=self.n {
            for b in a..=self.n {
                let c = self.pair_coeff(a, b);
                if c.is_zero() {
                    continue;
                }
                let mut exp = vec![0u32; self.n + 1];
                exp[a] += 1;
                exp[b] += 1;
                exp[l] += 1;
                let idx = table.index_of(&exp);
                out[idx] = out[idx].add(c);
            }
        }
        out
    }
}

/// Degree-d monomial basis with constant-time index lookup.
#[derive(Debug, Clone)]
pub struct MonomialTable {
    pub nvars: usize,
    pub degree: u32,
    pub monos: Vec<Monomial>,
    index: std::collections::HashMap<Vec<u32>, usize>,
}

impl MonomialTable {
    pub fn new(nvars: usize, degree: u32) -> MonomialTable {
        let monos = monomial_basis(nvars, degree);
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents.clone(), i))
            .collect();
        MonomialTable {
            nvars,
            degree,
            monos,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn index_of(&self, exps: &[u32]) -> usize {
        self.index[exps]
    }
}

/// A linearly independent list of quadrics.
#[derive(Debug, Clone)]
pub struct QuadSpace {
    pub basis: Vec<Quadric>,
    pub dim: usize,
}

/// A space of degree-d forms given by coefficient vectors in the monomial
/// basis.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub degree: u32,
    pub basis: Vec<Vec<Scalar>>,
}

fn check_degree(d: u32) -> Result<(), IdealError> {
    if d < 1 || d > MAX_DEGREE {
        return Err(IdealError::DegreeCap { got: d, max: MAX_DEGREE });
    }
    Ok(())
}

/// The s x C(n+d, d) evaluation matrix of the degree-d monomials at the
/// canonical point representatives.
pub fn evaluation_matrix(cfg: &PointConfig, d: u32) -> Result<Matrix, IdealError> {
    check_degree(d)?;
    let basis = monomial_basis(cfg.n() + 1, d);
    let rows: Vec<Vec<Scalar>> = cfg
        .points()
        .iter()
        .map(|p| basis.iter().map(|m| m.eval(p, cfg.field())).collect())
        .collect();
    Ok(Matrix::from_rows(cfg.field(), basis.len(), rows).unwrap())
}

/// Degree-d part of the vanishing ideal, as a canonical nullspace basis.
pub fn ideal_degree_part(cfg: &PointConfig, d: u32) -> Result<FormSpace, IdealError> {
    let m = evaluation_matrix(cfg, d)?;
    Ok(FormSpace {
        degree: d,
        basis: m.nullspace(),
    })
}

/// The quadric space I_2 with its canonical basis.
pub fn quad_space(cfg: &PointConfig) -> QuadSpace {
    let fs = ideal_degree_part(cfg, 2).expect("degree 2 always allowed");
    let dim = fs.basis.len();
    QuadSpace {
        basis: fs
            .basis
            .into_iter()
            .map(|coeffs| Quadric::from_coeffs(cfg.n(), coeffs))
            .collect(),
        dim,
    }
}

/// Number of independent conditions the points impose in degree d.
pub fn hilbert_function(cfg: &PointConfig, d: u32) -> Result<usize, IdealError> {
    Ok(evaluation_matrix(cfg, d)?.rank())
}

/// Membership of a quadric in the span of a quadric space, by rank
/// comparison.
pub fn contains(space: &QuadSpace, q: &Quadric) -> Result<bool, IdealError> {
    if space.basis.is_empty() {
        return Ok(q.is_zero());
    }
    if space.basis[0].coeffs.len() != q.coeffs.len() {
        return Err(IdealError::DimensionMismatch(
            "quadric lives in a different ambient space".into(),
        ));
    }
    let field = q.field();
    let cols = q.coeffs.len();
    let rows: Vec<Vec<Scalar>> = space.basis.iter().map(|b| b.coeffs.clone()).collect();
    let base = Matrix::from_rows(field, cols, rows.clone()).unwrap();
    let mut with_q = rows;
    with_q.push(q.coeffs.clone());
    let ext = Matrix::from_rows(field, cols, with_q).unwrap();
    Ok(base.rank() == ext.rank())
}

pub fn quadric_vanishes(cfg: &PointConfig, q: &Quadric) -> bool {
    cfg.points().iter().all(|p| q.eval(p).is_zero())
}

/// Vanishing of an arbitrary homogeneous form given as an evaluator.
pub fn form_vanishes_on(cfg: &PointConfig, eval: impl Fn(&ProjPoint) -> Scalar) -> bool {
    cfg.points().iter().all(|p| eval(p).is_zero())
}

pub fn linear_form_vanishes(cfg: &PointConfig, f: &LinearForm) -> bool {
    cfg.points().iter().all(|p| f.eval(p).is_zero())
}

/// True iff the product L*M vanishes at every point of the configuration,
/// i.e. each point lies on {L=0} or {M=0}.
pub fn product_in_ideal(cfg: &PointConfig, l: &LinearForm, m: &LinearForm) -> bool {
    cfg.points()
        .iter()
        .all(|p| l.eval(p).is_zero() || m.eval(p).is_zero())
}

/// Outcome of trying to factor a quadric into two linear forms.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitOutcome {
    Split(LinearForm, LinearForm),
    /// Rank at least 3: not a product of linear forms over any field.
    NotSplit,
    /// Rank 2 with a non-square discriminant: splits only over an extension.
    NotSplitOverField,
}

/// Factor a rank <= 2 quadric into linear forms over the base field.
pub fn split_quadric(q: &Quadric) -> Result<SplitOutcome, IdealError> {
    if q.is_zero() {
        return Err(IdealError::ZeroQuadric);
    }
    let field = q.field();
    let n = q.n;
    let m = n + 1;
    let half = Scalar::from_i64(field, 2).inv().expect("char 2 excluded");
    // symmetric matrix of the quadric
    let mut s = Matrix::zero(field, m, m);
    for a in 0..m {
        for b in a..m {
            let c = q.pair_coeff(a, b).clone();
            if a == b {
                s.set(a, a, c);
            } else {
                let h = c.mul(&half);
                s.set(a, b, h.clone());
                s.set(b, a, h);
            }
        }
    }
    // congruence diagonalization: A = E * S * E^T
    let mut a = s;
    let mut e = Matrix::identity(field, m);
    let swap_sym = |mat: &mut Matrix, i: usize, j: usize| {
        for c in 0..m {
            let x = mat.get(i, c).clone();
            let y = mat.get(j, c).clone();
            mat.set(i, c, y);
            mat.set(j, c, x);
        }
        for r in 0..m {
            let x = mat.get(r, i).clone();
            let y = mat.get(r, j).clone();
            mat.set(r, i, y);
            mat.set(r, j, x);
        }
    };
    for k in 0..m {
        if a.get(k, k).is_zero() {
            // prefer another nonzero diagonal entry
            if let Some(r) = (k + 1..m).find(|&r| !a.get(r, r).is_zero()) {
                swap_sym(&mut a, k, r);
                for c in 0..m {
                    let x = e.get(k, c).clone();
                    let y = e.get(r, c).clone();
                    e.set(k, c, y);
                    e.set(r, c, x);
                }
            } else {
                // all remaining diagonal entries vanish; use a cross term
                let mut found = None;
                'outer: for r in k..m {
                    for c in r + 1..m {
                        if !a.get(r, c).is_zero() {
                            found = Some((r, c));
                            break 'outer;
                        }
                    }
                }
                let Some((r, c)) = found else { break };
                // row r += row c, col r += col c  (makes A[r][r] = 2*A[r][c])
                for j in 0..m {
                    let v = a.get(r, j).add(a.get(c, j));
                    a.set(r, j, v);
                }
                for i in 0..m {
                    let v = a.get(i, r).add(a.get(i, c));
                    a.set(i, r, v);
                }
                for j in 0..m {
                    let v = e.get(r, j).add(e.get(c, j));
                    e.set(r, j, v);
                }
                if r != k {
                    swap_sym(&mut a, k, r);
                    for cc in 0..m {
                        let x = e.get(k, cc).clone();
                        let y = e.get(r, cc).clone();
                        e.set(k, cc, y);
                        e.set(r, cc, x);
                    }
                }
            }
        }
        let piv = a.get(k, k).clone();
        if piv.is_zero() {
            continue;
        }
        for i in k + 1..m {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k).div(&piv);
            for j in 0..m {
                let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                a.set(i, j, v);
            }
            for j in 0..m {
                let v = a.get(j, i).sub(&f.mul(a.get(j, k)));
                a.set(j, i, v);
            }
            for j in 0..m {
                let v = e.get(i, j).sub(&f.mul(e.get(k, j)));
                e.set(i, j, v);
            }
        }
    }
    // q(x) = sum_l d_l * u_l(x)^2 with u_l read off from columns of E^{-1}
    let einv = e.inverse().unwrap().expect("E is a product of elementary ops");
    let diag: Vec<(usize, Scalar)> = (0..m)
        .filter(|&l| !a.get(l, l).is_zero())
        .map(|l| (l, a.get(l, l).clone()))
        .collect();
    let form_of = |l: usize| -> LinearForm {
        LinearForm {
            coeffs: (0..m).map(|r| einv.get(r, l).clone()).collect(),
        }
    };
    let outcome = match diag.len() {
        0 => return Err(IdealError::ZeroQuadric),
        1 => {
            let (l, d) = &diag[0];
            let u = form_of(*l);
            SplitOutcome::Split(u.scale(d), u)
        }
        2 => {
            let (l1, d1) = &diag[0];
            let (l2, d2) = &diag[1];
            let disc = d2.div(d1).neg();
            match disc.sqrt() {
                None => SplitOutcome::NotSplitOverField,
                Some(t) => {
                    let u = form_of(*l1);
                    let v = form_of(*l2);
                    // q = d1 (u - t v)(u + t v)
                    let f1 = u.add(&v.scale(&t.neg())).scale(d1);
                    let f2 = u.add(&v.scale(&t));
                    SplitOutcome::Split(f1, f2)
                }
            }
        }
        _ => SplitOutcome::NotSplit,
    };
    if let SplitOutcome::Split(f1, f2) = &outcome {
        debug_assert_eq!(&f1.mul_linear(f2), q, "factorization must reproduce q");
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::DEFAULT_PRIME;
    use crate::projective::test_support::{frame_plus_unit, pt};

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(FieldDesc::Rational, v)
    }

    fn var_quadric(field: FieldDesc, n: usize, a: usize, b: usize) -> Quadric {
        let mut qd = Quadric::zero(field, n);
        qd.set_pair_coeff(a, b, Scalar::one(field));
        qd
    }

    fn twisted_cubic_cfg(npts: usize) -> PointConfig {
        let field = FieldDesc::Rational;
        let pts: Vec<Vec<Scalar>> = (0..npts as i64)
            .map(|t| vec![q(1), q(t), q(t * t), q(t * t * t)])
            .collect();
        PointConfig::new(3, field, pts).unwrap()
    }

    #[test]
    fn degree_one_matrix_is_coordinate_matrix() {
        let cfg = frame_plus_unit(FieldDesc::Rational, 2);
        let m = evaluation_matrix(&cfg, 1).unwrap();
        assert_eq!(&m, &cfg.coordinate_matrix());
        assert_eq!(hilbert_function(&cfg, 1).unwrap(), 3);
    }

    #[test]
    fn coordinate_points_degree_two() {
        // the three coordinate points of P^2: only square monomials survive
        let field = FieldDesc::Rational;
        let pts = vec![pt(field, &[1, 0, 0]), pt(field, &[0, 1, 0]), pt(field, &[0, 0, 1])];
        let cfg = PointConfig::new(2, field, pts).unwrap();
        let m = evaluation_matrix(&cfg, 2).unwrap();
        for (i, row) in (0..3).map(|i| (i, m.row(i))) {
            let ones: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, _)| j)
                .collect();
            assert_eq!(ones, vec![pair_index(3, i, i)]);
        }
        let space = quad_space(&cfg);
        assert_eq!(space.dim, 3);
        for b in &space.basis {
            assert!(b.is_square_free());
            assert!(quadric_vanishes(&cfg, b));
        }
        assert!(contains(&space, &var_quadric(field, 2, 0, 1)).unwrap());
        assert!(!contains(&space, &var_quadric(field, 2, 0, 0)).unwrap());
    }

    #[test]
    fn four_general_points_in_p2() {
        let cfg = frame_plus_unit(FieldDesc::Rational, 2);
        assert_eq!(hilbert_function(&cfg, 2).unwrap(), 4);
        assert_eq!(ideal_degree_part(&cfg, 2).unwrap().basis.len(), 2);
    }

    #[test]
    fn twisted_cubic_eight_points_has_three_quadrics() {
        let cfg = twisted_cubic_cfg(8);
        let m = evaluation_matrix(&cfg, 2).unwrap();
        assert_eq!(m.rank(), 7);
        let space = quad_space(&cfg);
        assert_eq!(space.dim, 3);
        // the three classical quadrics of the twisted cubic lie in the space
        let field = FieldDesc::Rational;
        let mut q1 = Quadric::zero(field, 3);
        q1.set_pair_coeff(0, 2, q(1));
        q1.set_pair_coeff(1, 1, q(-1));
        let mut q2 = Quadric::zero(field, 3);
        q2.set_pair_coeff(0, 3, q(1));
        q2.set_pair_coeff(1, 2, q(-1));
        let mut q3 = Quadric::zero(field, 3);
        q3.set_pair_coeff(1, 3, q(1));
        q3.set_pair_coeff(2, 2, q(-1));
        for qq in [&q1, &q2, &q3] {
            assert!(quadric_vanishes(&cfg, qq));
            assert!(contains(&space, qq).unwrap());
        }
    }

    #[test]
    fn hilbert_plus_ideal_dim_is_total() {
        let cfg = twisted_cubic_cfg(9);
        for d in 1..=4u32 {
            let total = binomial(3 + d as usize, d as usize);
            assert_eq!(
                hilbert_function(&cfg, d).unwrap()
                    + ideal_degree_part(&cfg, d).unwrap().basis.len(),
                total
            );
        }
        // points impose independent conditions in high degree
        assert_eq!(hilbert_function(&cfg, 4).unwrap(), cfg.s());
    }

    #[test]
    fn product_vanishing_examples() {
        let field = FieldDesc::Rational;
        let pts = vec![pt(field, &[1, 0, 0]), pt(field, &[0, 1, 0]), pt(field, &[0, 0, 1])];
        let cfg = PointConfig::new(2, field, pts).unwrap();
        let x0 = LinearForm::var(field, 3, 0);
        let x1 = LinearForm::var(field, 3, 1);
        assert!(product_in_ideal(&cfg, &x0, &x1));
        let with_ones = frame_plus_unit(field, 2);
        assert!(!product_in_ideal(&with_ones, &x0, &x1));
        assert!(quadric_vanishes(&cfg, &Quadric::zero(field, 2)));
    }

    #[test]
    fn split_pure_product() {
        let field = FieldDesc::Rational;
        let qd = var_quadric(field, 2, 0, 1);
        match split_quadric(&qd).unwrap() {
            SplitOutcome::Split(f1, f2) => {
                assert_eq!(f1.mul_linear(&f2), qd);
                let sup: Vec<_> = f1.support();
                assert_eq!(sup.len(), 1);
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn split_square() {
        let field = FieldDesc::Rational;
        let qd = var_quadric(field, 2, 0, 0);
        match split_quadric(&qd).unwrap() {
            SplitOutcome::Split(f1, f2) => {
                assert_eq!(f1.mul_linear(&f2), qd);
                assert_eq!(f1.support(), f2.support());
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn sum_of_squares_over_q_does_not_split() {
        let field = FieldDesc::Rational;
        let mut qd = Quadric::zero(field, 2);
        qd.set_pair_coeff(0, 0, q(1));
        qd.set_pair_coeff(1, 1, q(1));
        assert_eq!(split_quadric(&qd).unwrap(), SplitOutcome::NotSplitOverField);
    }

    #[test]
    fn sum_of_squares_splits_mod_one_mod_four_prime() {
        // 29 = 1 mod 4, so -1 is a square and x^2 + y^2 factors
        let field = FieldDesc::Fp { p: 29 };
        let one = Scalar::one(field);
        let mut qd = Quadric::zero(field, 2);
        qd.set_pair_coeff(0, 0, one.clone());
        qd.set_pair_coeff(1, 1, one);
        match split_quadric(&qd).unwrap() {
            SplitOutcome::Split(f1, f2) => assert_eq!(f1.mul_linear(&f2), qd),
            other => panic!("expected split, got {other:?}"),
        }
        // and stays irreducible mod a 3-mod-4 prime
        let field = FieldDesc::Fp { p: DEFAULT_PRIME };
        let one = Scalar::one(field);
        let mut qd = Quadric::zero(field, 2);
        qd.set_pair_coeff(0, 0, one.clone());
        qd.set_pair_coeff(1, 1, one);
        assert_eq!(split_quadric(&qd).unwrap(), SplitOutcome::NotSplitOverField);
    }

    #[test]
    fn smooth_conic_does_not_split() {
        let field = FieldDesc::Rational;
        let mut qd = Quadric::zero(field, 2);
        qd.set_pair_coeff(0, 2, q(1));
        qd.set_pair_coeff(1, 1, q(-1));
        assert_eq!(split_quadric(&qd).unwrap(), SplitOutcome::NotSplit);
        assert!(matches!(
            split_quadric(&Quadric::zero(field, 2)),
            Err(IdealError::ZeroQuadric)
        ));
    }

    #[test]
    fn random_products_split_back() {
        use rand::{Rng, SeedableRng};
        let field = FieldDesc::Fp { p: DEFAULT_PRIME };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = 3;
            let f1 = LinearForm {
                coeffs: (0..=n)
                    .map(|_| Scalar::from_i64(field, rng.gen_range(0..DEFAULT_PRIME as i64)))
                    .collect(),
            };
            let f2 = LinearForm {
                coeffs: (0..=n)
                    .map(|_| Scalar::from_i64(field, rng.gen_range(0..DEFAULT_PRIME as i64)))
                    .collect(),
            };
            if f1.is_zero() || f2.is_zero() {
                continue;
            }
            let qd = f1.mul_linear(&f2);
            if qd.is_zero() {
                continue;
            }
            match split_quadric(&qd).unwrap() {
                SplitOutcome::Split(g1, g2) => assert_eq!(g1.mul_linear(&g2), qd),
                other => panic!("product of linear forms failed to split: {other:?}"),
            }
        }
    }

    #[test]
    fn ideal_is_frame_equivariant() {
        let field = FieldDesc::Fp { p: DEFAULT_PRIME };
        let pts = vec![
            pt(field, &[1, 0, 0, 0]),
            pt(field, &[0, 1, 0, 0]),
            pt(field, &[0, 0, 1, 0]),
            pt(field, &[0, 0, 0, 1]),
            pt(field, &[1, 1, 1, 1]),
            pt(field, &[1, 2, 4, 8]),
            pt(field, &[1, 3, 9, 27]),
        ];
        let cfg = PointConfig::new(3, field, pts).unwrap();
        let (map, moved) = crate::projective::frame_transform(&cfg, &[1, 2, 4, 5], None).unwrap();
        let i2 = quad_space(&cfg);
        let i2_moved = quad_space(&moved);
        assert_eq!(i2.dim, i2_moved.dim);
        // pulling the transformed basis back along the map lands in I_2(cfg)
        for b in &i2_moved.basis {
            let pulled = b.compose(&map);
            assert!(contains(&i2, &pulled).unwrap());
        }
    }

    #[test]
    fn degree_cap_enforced() {
        let cfg = frame_plus_unit(FieldDesc::Rational, 2);
        assert!(matches!(
            evaluation_matrix(&cfg, 5),
            Err(IdealError::DegreeCap { .. })
        ));
        assert!(matches!(
            evaluation_matrix(&cfg, 0),
            Err(IdealError::DegreeCap { .. })
        ));
    }
}
