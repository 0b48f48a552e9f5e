//! Polyhedral cone helpers over dense rational vectors indexed by cells.
//!
//! A generator list `G` stands for the closed cone `cone(G ∪ units)`.

use ipalg_lp::rational::{dot, normalize_sum, primitive, unit_leading};
use ipalg_lp::{
    current_limits, extreme_rays, in_conic_hull, project_cone, solve, ConeRays, HRep,
    LinearProgram, LpError, LpOutcome, Rational, Relation,
};
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::space::Projection;

pub(crate) type Vector = Vec<Rational>;

pub(crate) fn unit(n: usize, i: usize) -> Vector {
    let mut e = vec![Rational::zero(); n];
    e[i] = Rational::one();
    e
}

pub(crate) fn is_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

/// Rows `Σ_j λ_j g_j(ω)` of the cell-wise constraint matrix.
fn cell_rows(gens: &[Vector], n: usize) -> Vec<Vector> {
    (0..n)
        .map(|w| gens.iter().map(|g| g[w].clone()).collect())
        .collect()
}

/// `f ∈ cone(G ∪ units)`, i.e. some `λ ≥ 0` has `Σ λ_j g_j ≤ f`.
pub(crate) fn closed_contains(gens: &[Vector], f: &[Rational]) -> Result<bool> {
    if is_nonnegative(f) {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let mut lp = LinearProgram::new(gens.len());
    for (row, rhs) in cell_rows(gens, f.len()).into_iter().zip(f) {
        lp.add_constraint(row, Relation::Le, rhs.clone());
    }
    Ok(!solve(&lp)?.is_infeasible())
}

/// No nonzero `λ ≥ 0` with `Σ λ_j g_j ≤ 0`.
pub(crate) fn avoids_partial_loss(gens: &[Vector]) -> Result<bool> {
    if gens.is_empty() {
        return Ok(true);
    }
    let n = gens[0].len();
    let mut lp = LinearProgram::new(gens.len()).maximize(vec![Rational::one(); gens.len()]);
    for row in cell_rows(gens, n) {
        lp.add_constraint(row, Relation::Le, Rational::zero());
    }
    Ok(matches!(solve(&lp)?, LpOutcome::Optimal { value, .. } if value.is_zero()))
}

/// `sup{μ : f − μ ∈ cone(G ∪ units)}`, or `None` when unbounded (sure loss).
pub(crate) fn lower_value(gens: &[Vector], f: &[Rational]) -> Result<Option<Rational>> {
    if gens.is_empty() {
        return Ok(f.iter().min().cloned());
    }
    // Variables: μ (free), then λ.
    let mut lp = LinearProgram::new(gens.len() + 1).free(0);
    let mut objective = vec![Rational::zero(); gens.len() + 1];
    objective[0] = Rational::one();
    lp.set_objective(objective);
    for (row, rhs) in cell_rows(gens, f.len()).into_iter().zip(f) {
        let mut coeffs = Vec::with_capacity(gens.len() + 1);
        coeffs.push(Rational::one());
        coeffs.extend(row);
        lp.add_constraint(coeffs, Relation::Le, rhs.clone());
    }
    match solve(&lp)? {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Unbounded { .. } => Ok(None),
        LpOutcome::Infeasible => unreachable!("μ can always be lowered"),
    }
}

/// No `λ ≥ 0` with `Σ λ_j g_j` uniformly negative.
pub(crate) fn avoids_sure_loss(gens: &[Vector], n: usize) -> Result<bool> {
    Ok(lower_value(gens, &vec![Rational::zero(); n])?.is_some())
}

/// Normalized extreme rays of `{p ≥ 0 : p·g ≥ 0 for all g}`, sorted.
///
/// These are the vertices of the credal set of the generators; empty when the
/// generators incur sure loss.
pub(crate) fn dual_rays(gens: &[Vector], n: usize) -> Result<Vec<Vector>> {
    let mut h = HRep::new(n);
    h.inequalities = (0..n).map(|i| unit(n, i)).collect();
    h.inequalities.extend(gens.iter().cloned());
    let rays = extreme_rays(&h)?;
    Ok(normalized(rays.rays))
}

pub(crate) fn normalized(rays: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = rays.iter().filter_map(|r| normalize_sum(r)).collect();
    out.sort();
    out.dedup();
    out
}

/// `x ∈ cone(vectors)` with nonnegative coefficients.
pub(crate) fn in_cone(vectors: &[Vector], x: &[Rational]) -> bool {
    let cone = ConeRays {
        rays: vectors.to_vec(),
        lineality: Vec::new(),
    };
    in_conic_hull(&cone, x)
}

/// Keeps only the vectors that are not conic combinations of the others.
pub(crate) fn extreme_subset(mut vectors: Vec<Vector>) -> Vec<Vector> {
    vectors.sort();
    vectors.dedup();
    let mut i = 0;
    while i < vectors.len() {
        let candidate = vectors.remove(i);
        if in_cone(&vectors, &candidate) {
            continue;
        }
        vectors.insert(i, candidate);
        i += 1;
    }
    vectors
}

/// Canonical, irredundant generators of `cone(G ∪ units)`: nonnegative gambles
/// dropped, leading entries scaled to ±1, sorted, redundant generators removed.
pub(crate) fn canonical_generators(gens: Vec<Vector>) -> Result<Vec<Vector>> {
    let mut gens: Vec<Vector> = gens
        .into_iter()
        .filter(|g| !is_nonnegative(g))
        .map(|g| unit_leading(&g))
        .collect();
    gens.sort();
    gens.dedup();
    let mut i = 0;
    while i < gens.len() {
        let candidate = gens.remove(i);
        if closed_contains(&gens, &candidate)? {
            continue;
        }
        gens.insert(i, candidate);
        i += 1;
    }
    Ok(gens)
}

/// H-representation of `cone(vectors)` (no implicit units).
pub(crate) fn hrep_of_cone(vectors: &[Vector], n: usize) -> Result<HRep> {
    let mut polar = HRep::new(n);
    polar.inequalities = vectors.to_vec();
    let dual = extreme_rays(&polar)?;
    let mut h = HRep::new(n);
    h.inequalities = dual.rays;
    h.equalities = dual.lineality;
    Ok(h)
}

/// Generators (rays and both directions of lineality) of an H-cone.
pub(crate) fn generators_of(h: &HRep) -> Result<Vec<Vector>> {
    Ok(extreme_rays(h)?.generators())
}

/// Generators of `cone(G ∪ units) ∩ L_S`, expressed on the cells of `Ω_S`.
///
/// Computed from the marginals of the extreme rays of the dual cone. When the
/// source space is too wide for ray enumeration, falls back to Fourier-Motzkin.
pub(crate) fn marginal_closed_cone(gens: &[Vector], proj: &Projection) -> Result<Vec<Vector>> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    if proj.source_len() <= current_limits().max_ray_dim {
        return marginal_closed_cone_dual(gens, proj);
    }
    marginal_closed_cone_fm(gens, proj)
}

/// The shadow of `{(y, λ) : y∘π − Σ λ_j g_j ≥ 0, λ ≥ 0}` on `y`.
pub(crate) fn marginal_closed_cone_fm(gens: &[Vector], proj: &Projection) -> Result<Vec<Vector>> {
    let (ns, m) = (proj.target_len(), gens.len());
    let dim = ns + m;
    let mut h = HRep::new(dim);
    for w in 0..proj.source_len() {
        let mut row = vec![Rational::zero(); dim];
        row[proj.image(w)] = Rational::one();
        for (j, g) in gens.iter().enumerate() {
            row[ns + j] = -g[w].clone();
        }
        h.inequalities.push(row);
    }
    for j in 0..m {
        h.inequalities.push(unit(dim, ns + j));
    }
    let keep: Vec<usize> = (0..ns).collect();
    let shadow = project_cone(&h, &keep)?;
    canonical_generators(generators_of(&shadow)?)
}

/// `{y : marg(q)·y ≥ 0 for every extreme ray q of (cone(G ∪ units))*}`.
pub(crate) fn marginal_closed_cone_dual(gens: &[Vector], proj: &Projection) -> Result<Vec<Vector>> {
    let mut h = HRep::new(proj.target_len());
    h.inequalities = dual_rays(gens, proj.source_len())?
        .iter()
        .map(|q| primitive(&proj.pushforward(q)))
        .collect();
    h.inequalities.sort();
    h.inequalities.dedup();
    canonical_generators(generators_of(&h)?)
}

/// All mass functions on `Ω_R` that put the mass of each target cell on a single
/// cell of its fiber: the extreme rays of `{p ≥ 0 : p∘π⁻¹ ∈ cone(Q)}`.
pub(crate) fn expand_masses(masses: &[Vector], proj: &Projection) -> Result<Vec<Vector>> {
    let fibers = proj.fibers();
    let limit = current_limits().max_rays;
    let mut out = Vec::new();
    for q in masses {
        let support: Vec<usize> = (0..q.len()).filter(|&y| !q[y].is_zero()).collect();
        let mut partial: Vec<Vector> = vec![vec![Rational::zero(); proj.source_len()]];
        for &y in &support {
            let mut next = Vec::with_capacity(partial.len() * fibers[y].len());
            for p in &partial {
                for &w in &fibers[y] {
                    let mut p = p.clone();
                    p[w] = q[y].clone();
                    next.push(p);
                }
            }
            LpError::check("max_rays", limit, out.len() + next.len())?;
            partial = next;
        }
        out.extend(partial);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub(crate) fn all_positive_against(q: &[Vector], g: &[Rational]) -> bool {
    q.iter().all(|p| dot(p, g).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;
    use ipalg_lp::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn partial_loss() {
        assert!(avoids_partial_loss(&[v(&[1, -1])]).unwrap());
        assert!(!avoids_partial_loss(&[v(&[1, -2]), v(&[-1, 2])]).unwrap());
        assert!(!avoids_partial_loss(&[v(&[-1, -1])]).unwrap());
        assert!(!avoids_partial_loss(&[v(&[0, -1])]).unwrap());
        assert!(avoids_partial_loss(&[]).unwrap());
    }

    #[test]
    fn lower_values() {
        assert_eq!(lower_value(&[], &v(&[4, -2])).unwrap(), Some(int(-2)));
        assert_eq!(
            lower_value(&[v(&[1, -1])], &v(&[1, 0])).unwrap(),
            Some(ratio(1, 2))
        );
        assert_eq!(
            lower_value(&[v(&[1, -2])], &v(&[1, 0])).unwrap(),
            Some(ratio(2, 3))
        );
        assert_eq!(lower_value(&[v(&[-1, -1])], &v(&[0, 0])).unwrap(), None);
    }

    #[test]
    fn credal_vertices_of_one_generator() {
        let rays = dual_rays(&[v(&[1, -1])], 2).unwrap();
        assert_eq!(rays, vec![vec![ratio(1, 2), ratio(1, 2)], v(&[1, 0])]);
        assert!(dual_rays(&[v(&[-1, -1])], 2).unwrap().is_empty());
    }

    #[test]
    fn canonical_form() {
        let gens =
            canonical_generators(vec![v(&[2, -2]), v(&[1, -1]), v(&[3, 1]), v(&[3, -1])]).unwrap();
        // (3,-1) = (1,-1) + (2,0) is redundant.
        assert_eq!(gens, vec![v(&[1, -1])]);
    }

    #[test]
    fn parity_marginal_is_vacuous() {
        let s = Space::binary(&["X", "Y"]);
        let proj = s
            .projection(s.full_scope(), s.scope(&["X"]).unwrap())
            .unwrap();
        assert!(marginal_closed_cone(&[v(&[1, -1, -1, 1])], &proj)
            .unwrap()
            .is_empty());
        let proj = s
            .projection(s.full_scope(), s.scope(&["X"]).unwrap())
            .unwrap();
        assert_eq!(
            marginal_closed_cone(&[v(&[1, 1, -1, -1])], &proj).unwrap(),
            vec![v(&[1, -1])]
        );
    }

    #[test]
    fn marginal_routes_agree() {
        let s = Space::binary(&["X", "Y", "Z"]);
        let gens = vec![
            v(&[1, -2, 0, 1, -1, 3, 0, -1]),
            v(&[-1, 1, 1, 0, 2, -3, 1, 1]),
        ];
        for names in [&["X"][..], &["Y", "Z"], &["X", "Z"], &[]] {
            let proj = s
                .projection(s.full_scope(), s.scope(names).unwrap())
                .unwrap();
            assert_eq!(
                marginal_closed_cone_fm(&gens, &proj).unwrap(),
                marginal_closed_cone_dual(&gens, &proj).unwrap()
            );
        }
    }

    #[test]
    fn mass_expansion() {
        let s = Space::binary(&["X", "Y"]);
        let proj = s
            .projection(s.full_scope(), s.scope(&["X"]).unwrap())
            .unwrap();
        let out = expand_masses(&[vec![ratio(1, 2), ratio(1, 2)]], &proj).unwrap();
        assert_eq!(out.len(), 4);
        for p in &out {
            assert_eq!(proj.pushforward(p), vec![ratio(1, 2), ratio(1, 2)]);
        }
    }
}
