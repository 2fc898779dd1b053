//! Projective points and configurations: span and rank predicates, general
//! position tests, the special-position index with its witness subset, and
//! projective coordinate changes.

use crate::combinat::{binomial, subsets};
use crate::exactfield::{ExactFieldError, FieldDesc, Matrix, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProjectiveError {
    #[error("point index {0} out of range")]
    IndexError(usize),
    #[error("subset enumeration would exceed the cap of {cap} subsets ({needed} needed)")]
    SizeLimit { needed: usize, cap: usize },
    #[error("frame rows are not projectively independent")]
    SingularFrame,
    #[error("unit point lies on a coordinate hyperplane of the frame")]
    BadUnit,
    #[error("configuration invalid: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Field(#[from] ExactFieldError),
}

/// Default cap on the number of subsets a position scan may enumerate.
pub const DEFAULT_SUBSET_CAP: usize = 200_000;

/// A point of projective space, stored with its canonical representative:
/// first nonzero coordinate scaled to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<ProjPoint, ProjectiveError> {
        let Some(first) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(ProjectiveError::BadConfig("zero coordinate vector".into()));
        };
        let inv = coords[first].inv().unwrap();
        let coords = coords.iter().map(|c| c.mul(&inv)).collect();
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A configuration of distinct points spanning projective n-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    n: usize,
    field: FieldDesc,
    points: Vec<ProjPoint>,
}

impl PointConfig {
    pub fn new(
        n: usize,
        field: FieldDesc,
        raw_points: Vec<Vec<Scalar>>,
    ) -> Result<PointConfig, ProjectiveError> {
        field.validate()?;
        if n < 2 {
            return Err(ProjectiveError::BadConfig(format!(
                "ambient dimension must be at least 2, got {n}"
            )));
        }
        if let FieldDesc::Fp { p } = field {
            if (p as usize) <= n + 1 {
                return Err(ProjectiveError::BadConfig(format!(
                    "modulus {p} too small for ambient dimension {n}"
                )));
            }
        }
        if raw_points.len() < n + 1 {
            return Err(ProjectiveError::BadConfig(format!(
                "need at least {} points, got {}",
                n + 1,
                raw_points.len()
            )));
        }
        let mut points = Vec::with_capacity(raw_points.len());
        for (i, coords) in raw_points.into_iter().enumerate() {
            if coords.len() != n + 1 {
                return Err(ProjectiveError::BadConfig(format!(
                    "point {i} has {} coordinates, expected {}",
                    coords.len(),
                    n + 1
                )));
            }
            if coords.iter().any(|c| c.field() != field) {
                return Err(ExactFieldError::FieldMismatch.into());
            }
            points.push(ProjPoint::new(coords)?);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(ProjectiveError::BadConfig(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        let cfg = PointConfig { n, field, points };
        if cfg.coordinate_matrix().rank() != n + 1 {
            return Err(ProjectiveError::BadConfig(
                "points do not span the ambient space".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn field(&self) -> FieldDesc {
        self.field
    }
    pub fn s(&self) -> usize {
        self.points.len()
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    /// The s x (n+1) matrix of canonical coordinates.
    pub fn coordinate_matrix(&self) -> Matrix {
        let rows: Vec<Vec<Scalar>> = self.points.iter().map(|p| p.coords().to_vec()).collect();
        Matrix::from_rows(self.field, self.n + 1, rows).unwrap()
    }
}

/// Rank of the coordinate rows selected by `idxs`.
pub fn subset_rank(cfg: &PointConfig, idxs: &[usize]) -> Result<usize, ProjectiveError> {
    if idxs.is_empty() {
        return Err(ProjectiveError::BadConfig("empty index list".into()));
    }
    let mut rows = Vec::with_capacity(idxs.len());
    for &i in idxs {
        if i >= cfg.s() {
            return Err(ProjectiveError::IndexError(i));
        }
        rows.push(cfg.point(i).coords().to_vec());
    }
    Ok(Matrix::from_rows(cfg.field, cfg.n + 1, rows)?.rank())
}

fn check_cap(s: usize, k: usize, cap: usize) -> Result<(), ProjectiveError> {
    let needed = binomial(s, k);
    if needed > cap {
        return Err(ProjectiveError::SizeLimit { needed, cap });
    }
    Ok(())
}

/// True iff no n+1 points lie on a hyperplane.
pub fn is_general_position(cfg: &PointConfig) -> Result<bool, ProjectiveError> {
    is_general_position_capped(cfg, DEFAULT_SUBSET_CAP)
}

pub fn is_general_position_capped(cfg: &PointConfig, cap: usize) -> Result<bool, ProjectiveError> {
    let k = cfg.n + 1;
    check_cap(cfg.s(), k, cap)?;
    for sub in subsets(cfg.s(), k) {
        if subset_rank(cfg, &sub)? < k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Position type of a configuration: general position, or the smallest index
/// i such that no n-i points lie on a P^(n-i-2), together with a witness
/// subset of n-i+1 points spanning only a P^(n-i-1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Position {
    General,
    Special { i: usize, witness: Vec<usize> },
}

pub fn special_position_index(cfg: &PointConfig) -> Result<Position, ProjectiveError> {
    special_position_index_capped(cfg, DEFAULT_SUBSET_CAP)
}

pub fn special_position_index_capped(
    cfg: &PointConfig,
    cap: usize,
) -> Result<Position, ProjectiveError> {
    if is_general_position_capped(cfg, cap)? {
        return Ok(Position::General);
    }
    let n = cfg.n;
    for i in 0..=n.saturating_sub(2) {
        // condition (2) at i: no n-i points with rank <= n-i-1
        let k = n - i;
        check_cap(cfg.s(), k, cap)?;
        let holds = subsets(cfg.s(), k)
            .into_iter()
            .all(|sub| subset_rank(cfg, &sub).map_or(false, |r| r >= k));
        if !holds {
            continue;
        }
        // condition (1) at i holds automatically; find the lexicographically
        // smallest witness of n-i+1 points of rank n-i.
        check_cap(cfg.s(), k + 1, cap)?;
        for sub in subsets(cfg.s(), k + 1) {
            if subset_rank(cfg, &sub)? == k {
                return Ok(Position::Special { i, witness: sub });
            }
        }
        return Err(ProjectiveError::BadConfig(
            "condition (2) holds but no degenerate subset found".into(),
        ));
    }
    Err(ProjectiveError::BadConfig(
        "no admissible special index; distinctness violated upstream".into(),
    ))
}

/// An invertible change of projective coordinates, acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMap {
    g: Matrix,
}

impl FrameMap {
    pub fn new(g: Matrix) -> Result<FrameMap, ProjectiveError> {
        if g.rows() != g.cols() {
            return Err(ProjectiveError::SingularFrame);
        }
        if g.rank() != g.rows() {
            return Err(ProjectiveError::SingularFrame);
        }
        Ok(FrameMap { g })
    }

    pub fn identity(field: FieldDesc, n: usize) -> FrameMap {
        FrameMap {
            g: Matrix::identity(field, n + 1),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn inverse(&self) -> FrameMap {
        FrameMap {
            g: self.g.inverse().unwrap().unwrap(),
        }
    }

    /// self after other: applies `other` first.
    pub fn compose(&self, other: &FrameMap) -> FrameMap {
        FrameMap {
            g: self.g.mul(&other.g).unwrap(),
        }
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.g.mul_vec(p.coords()).unwrap()).unwrap()
    }

    pub fn apply_config(&self, cfg: &PointConfig) -> PointConfig {
        let raw = cfg
            .points()
            .iter()
            .map(|p| self.g.mul_vec(p.coords()).unwrap())
            .collect();
        PointConfig::new(cfg.n(), cfg.field(), raw).expect("frame maps preserve config invariants")
    }
}

/// Compute the coordinate change sending the selected frame points to
/// e_0..e_n (and, if requested, the unit point to (1:...:1)); returns the
/// map and the transformed configuration.
pub fn frame_transform(
    cfg: &PointConfig,
    frame_idxs: &[usize],
    unit_idx: Option<usize>,
) -> Result<(FrameMap, PointConfig), ProjectiveError> {
    let n = cfg.n;
    if frame_idxs.len() != n + 1 {
        return Err(ProjectiveError::BadConfig(format!(
            "frame needs {} points, got {}",
            n + 1,
            frame_idxs.len()
        )));
    }
    for &i in frame_idxs {
        if i >= cfg.s() {
            return Err(ProjectiveError::IndexError(i));
        }
    }
    // columns of M are the frame points
    let mut m = Matrix::zero(cfg.field, n + 1, n + 1);
    for (col, &idx) in frame_idxs.iter().enumerate() {
        for row in 0..=n {
            m.set(row, col, cfg.point(idx).coords()[row].clone());
        }
    }
    if m.rank() != n + 1 {
        return Err(ProjectiveError::SingularFrame);
    }
    let m = if let Some(u) = unit_idx {
        if u >= cfg.s() {
            return Err(ProjectiveError::IndexError(u));
        }
        // classical frame: rescale columns so the unit point is the column sum
        let c = m
            .solve(cfg.point(u).coords())?
            .ok_or(ProjectiveError::SingularFrame)?;
        if c.iter().any(|x| x.is_zero()) {
            return Err(ProjectiveError::BadUnit);
        }
        let mut scaled = Matrix::zero(cfg.field, n + 1, n + 1);
        for col in 0..=n {
            for row in 0..=n {
                scaled.set(row, col, m.get(row, col).mul(&c[col]));
            }
        }
        scaled
    } else {
        m
    };
    let g = m.inverse()?.ok_or(ProjectiveError::SingularFrame)?;
    let map = FrameMap { g };
    let transformed = map.apply_config(cfg);
    Ok((map, transformed))
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn fp() -> FieldDesc {
        FieldDesc::Fp {
            p: crate::exactfield::DEFAULT_PRIME,
        }
    }

    pub fn pt(field: FieldDesc, coords: &[i64]) -> Vec<Scalar> {
        coords
            .iter()
            .map(|&c| Scalar::from_i64(field, c))
            .collect()
    }

    /// Coordinate points of P^n plus the all-ones point.
    pub fn frame_plus_unit(field: FieldDesc, n: usize) -> PointConfig {
        let mut pts = Vec::new();
        for i in 0..=n {
            let mut c = vec![0i64; n + 1];
            c[i] = 1;
            pts.push(pt(field, &c));
        }
        pts.push(pt(field, &vec![1i64; n + 1]));
        PointConfig::new(n, field, pts).unwrap()
    }
}
