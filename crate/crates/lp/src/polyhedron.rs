//! Double description method and vertex enumeration.

use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};

use crate::guard::{current_limits, record};
use crate::linalg::{combine_columns, independent_rows, inverse, nullspace};
use crate::rational::{dot, primitive, Rational};
use crate::simplex::{Constraint, Relation};
use crate::LpError;

/// Homogeneous H-representation `{x : a·x >= 0 for a in inequalities, e·x = 0 for e in equalities}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<Vec<Rational>>,
    pub equalities: Vec<Vec<Rational>>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|a| !dot(a, x).is_negative())
            && self.equalities.iter().all(|e| dot(e, x).is_zero())
    }

    pub(crate) fn check_dims(&self) -> Result<(), LpError> {
        for row in self.inequalities.iter().chain(&self.equalities) {
            if row.len() != self.dim {
                return Err(LpError::DimensionMismatch {
                    expected: self.dim,
                    found: row.len(),
                });
            }
        }
        Ok(())
    }
}

/// V-representation of a cone: `cone(rays) + span(lineality)`.
///
/// Rays and lineality vectors are primitive integer vectors in lexicographic order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConeRays {
    pub rays: Vec<Vec<Rational>>,
    pub lineality: Vec<Vec<Rational>>,
}

impl ConeRays {
    /// Conic generators: the rays followed by `±l` for every lineality vector.
    pub fn generators(&self) -> Vec<Vec<Rational>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

struct Ray {
    z: Vec<Rational>,
    zeros: FixedBitSet,
}

/// Extreme rays and lineality space of a homogeneous cone.
pub fn extreme_rays(h: &HRep) -> Result<ConeRays, LpError> {
    h.check_dims()?;
    let limits = current_limits();
    LpError::check("max_ray_dim", limits.max_ray_dim, h.dim)?;
    let d = h.dim;
    if d == 0 {
        return Ok(ConeRays::default());
    }

    // x = N y parametrizes the equality subspace.
    let n_basis: Vec<Vec<Rational>> = if h.equalities.is_empty() {
        (0..d)
            .map(|i| {
                let mut e = vec![Rational::zero(); d];
                e[i] = Rational::from_integer(1.into());
                e
            })
            .collect()
    } else {
        nullspace(&h.equalities, d)
    };
    let k = n_basis.len();
    if k == 0 {
        return Ok(ConeRays::default());
    }
    let rows_y: Vec<Vec<Rational>> = h
        .inequalities
        .iter()
        .map(|a| n_basis.iter().map(|col| dot(a, col)).collect())
        .filter(|row: &Vec<Rational>| row.iter().any(|x| !x.is_zero()))
        .collect();

    // Lineality space in y coordinates, and a complement W for the pointed part.
    let lineality_y = nullspace(&rows_y, k);
    let w_basis: Vec<Vec<Rational>> = if lineality_y.is_empty() {
        (0..k)
            .map(|i| {
                let mut e = vec![Rational::zero(); k];
                e[i] = Rational::from_integer(1.into());
                e
            })
            .collect()
    } else {
        nullspace(&lineality_y, k)
    };
    let r = w_basis.len();
    let to_x = |z: &[Rational]| -> Vec<Rational> {
        let y = combine_columns(&w_basis, z, k);
        combine_columns(&n_basis, &y, d)
    };

    let mut lineality: Vec<Vec<Rational>> = lineality_y
        .iter()
        .map(|l| primitive(&combine_columns(&n_basis, l, d)))
        .collect();
    lineality.sort();

    let rays = if r == 0 {
        Vec::new()
    } else {
        let rows_z: Vec<Vec<Rational>> = rows_y
            .iter()
            .map(|a| w_basis.iter().map(|col| dot(a, col)).collect())
            .collect();
        pointed_rays(&rows_z, r, limits.max_rays)?
    };
    let mut rays: Vec<Vec<Rational>> = rays.iter().map(|z| primitive(&to_x(z))).collect();
    rays.sort();
    rays.dedup();
    record(|s| s.rays_enumerated += rays.len() as u64);
    Ok(ConeRays { rays, lineality })
}

/// Double description on a pointed cone `{z : A z >= 0}` with `rank A = r`.
fn pointed_rays(
    rows: &[Vec<Rational>],
    r: usize,
    max_rays: usize,
) -> Result<Vec<Vec<Rational>>, LpError> {
    let m = rows.len();
    let initial = independent_rows(rows, r);
    debug_assert_eq!(initial.len(), r, "pointed cone must have full column rank");
    let basis_matrix: Vec<Vec<Rational>> = initial.iter().map(|&i| rows[i].clone()).collect();
    let inv = inverse(&basis_matrix).expect("independent rows form an invertible matrix");

    let mut order: Vec<usize> = initial.clone();
    let mut seen = vec![false; m];
    for &i in &initial {
        seen[i] = true;
    }
    order.extend((0..m).filter(|&i| !seen[i]));

    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let z: Vec<Rational> =
                primitive(&inv.iter().map(|row| row[j].clone()).collect::<Vec<_>>());
            let mut zeros = FixedBitSet::with_capacity(m);
            for (pos, &row) in initial.iter().enumerate() {
                if pos != j {
                    zeros.insert(row);
                }
            }
            Ray { z, zeros }
        })
        .collect();

    for &row_idx in &order[r..] {
        let a = &rows[row_idx];
        let values: Vec<Rational> = rays.iter().map(|ray| dot(a, &ray.z)).collect();
        let positive: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let negative: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if negative.is_empty() {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.zeros.insert(row_idx);
                }
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &positive {
            for &q in &negative {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < r {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != q)
                    .all(|o| !common.is_subset(&rays[o].zeros));
                if !adjacent {
                    continue;
                }
                let vp = &values[p];
                let vq = &values[q];
                let z: Vec<Rational> = rays[q]
                    .z
                    .iter()
                    .zip(&rays[p].z)
                    .map(|(zq, zp)| vp * zq - vq * zp)
                    .collect();
                let mut zeros = common;
                zeros.insert(row_idx);
                fresh.push(Ray {
                    z: primitive(&z),
                    zeros,
                });
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut ray, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                ray.zeros.insert(row_idx);
            }
            kept.push(ray);
        }
        kept.extend(fresh);
        LpError::check("max_rays", max_rays, kept.len())?;
        rays = kept;
    }
    Ok(rays.into_iter().map(|ray| ray.z).collect())
}

/// Vertices of a bounded polytope given by affine constraints, in lexicographic order.
///
/// An empty polytope yields an empty list.
pub fn enumerate_vertices(
    dim: usize,
    constraints: &[Constraint],
) -> Result<Vec<Vec<Rational>>, LpError> {
    let limits = current_limits();
    LpError::check("max_vertex_dim", limits.max_vertex_dim, dim)?;
    LpError::check(
        "max_vertex_constraints",
        limits.max_vertex_constraints,
        constraints.len(),
    )?;
    for c in constraints {
        if c.coeffs.len() != dim {
            return Err(LpError::DimensionMismatch {
                expected: dim,
                found: c.coeffs.len(),
            });
        }
    }
    // Homogenize with t >= 0: a·x <= b t  ->  b t - a·x >= 0.
    let mut h = HRep::new(dim + 1);
    for c in constraints {
        let mut row: Vec<Rational> = c.coeffs.clone();
        row.push(-c.rhs.clone());
        match c.relation {
            Relation::Ge => h.inequalities.push(row),
            Relation::Le => h.inequalities.push(row.iter().map(|x| -x).collect()),
            Relation::Eq => h.equalities.push(row),
        }
    }
    let mut t_row = vec![Rational::zero(); dim + 1];
    t_row[dim] = Rational::from_integer(1.into());
    h.inequalities.push(t_row);

    let cone = extreme_rays(&h)?;
    let mut vertices = Vec::new();
    let mut recession = !cone.lineality.is_empty();
    for ray in &cone.rays {
        let t = &ray[dim];
        if t.is_positive() {
            vertices.push(ray[..dim].iter().map(|x| x / t).collect::<Vec<_>>());
        } else {
            recession = true;
        }
    }
    if recession && !vertices.is_empty() {
        return Err(LpError::Unbounded);
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Checks that `x` lies in `cone(rays) + span(lineality)` by solving the exact system.
pub fn in_conic_hull(cone: &ConeRays, x: &[Rational]) -> bool {
    let gens = cone.generators();
    if gens.is_empty() {
        return x.iter().all(Zero::is_zero);
    }
    let mut lp = crate::LinearProgram::new(gens.len());
    for i in 0..x.len() {
        lp.add_constraint(
            gens.iter().map(|g| g[i].clone()).collect(),
            Relation::Eq,
            x[i].clone(),
        );
    }
    !crate::solve(&lp).map(|o| o.is_infeasible()).unwrap_or(true)
}
