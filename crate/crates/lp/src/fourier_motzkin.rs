//! Fourier-Motzkin projection of homogeneous cones.

use num_traits::{One, Signed, Zero};

use crate::guard::current_limits;
use crate::polyhedron::HRep;
use crate::rational::{is_zero_vec, primitive, Rational};
use crate::simplex::{solve, LinearProgram, LpOutcome, Relation, VarBound};
use crate::LpError;

/// Projects the cone `h` onto the coordinates listed in `keep` (in that order).
///
/// The result describes exactly the shadow `{x_keep : ∃ x_rest, x ∈ h}`.
/// Redundant inequalities are removed after every elimination step.
/// Variables fixed by an equality are substituted first; the rest are paired off
/// cheapest first.
pub fn project_cone(h: &HRep, keep: &[usize]) -> Result<HRep, LpError> {
    h.check_dims()?;
    if let Some(&bad) = keep.iter().find(|&&k| k >= h.dim) {
        return Err(LpError::BadIndex(bad));
    }
    let mut kept = vec![false; h.dim];
    for &k in keep {
        kept[k] = true;
    }
    let eliminate: Vec<usize> = (0..h.dim).filter(|&i| !kept[i]).collect();
    LpError::check(
        "max_eliminated",
        current_limits().max_eliminated,
        eliminate.len(),
    )?;

    let mut ineqs: Vec<Vec<Rational>> = h.inequalities.iter().map(|r| primitive(r)).collect();
    let mut eqs: Vec<Vec<Rational>> = h.equalities.iter().map(|r| primitive(r)).collect();

    // Substitute through equalities first; they never mention the variables left
    // for pairing afterwards.
    let mut remaining = eliminate;
    while let Some(k) = remaining
        .iter()
        .position(|&var| eqs.iter().any(|e| !e[var].is_zero()))
    {
        let var = remaining.remove(k);
        let pos = eqs
            .iter()
            .position(|e| !e[var].is_zero())
            .expect("found above");
        let pivot = eqs.remove(pos);
        let substitute = |row: &mut Vec<Rational>| {
            if row[var].is_zero() {
                return;
            }
            let factor = &row[var] / &pivot[var];
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            *row = primitive(row);
        };
        ineqs.iter_mut().for_each(substitute);
        eqs.iter_mut().for_each(substitute);
        ineqs.retain(|r| !is_zero_vec(r));
        eqs.retain(|r| !is_zero_vec(r));
    }
    ineqs.sort();
    ineqs.dedup();

    let mut rows = remove_redundant(ineqs, &eqs, h.dim)?;

    while !remaining.is_empty() {
        // Cheapest variable first.
        let cost = |var: usize| {
            let pos = rows.iter().filter(|r| r[var].is_positive()).count();
            let neg = rows.iter().filter(|r| r[var].is_negative()).count();
            (pos * neg) as i64 - (pos + neg) as i64
        };
        let k = (0..remaining.len())
            .min_by_key(|&k| cost(remaining[k]))
            .expect("nonempty");
        let var = remaining.remove(k);
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows.drain(..) {
            if row[var].is_positive() {
                pos.push(row);
            } else if row[var].is_negative() {
                neg.push(row);
            } else {
                next.push(row);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = -n[var].clone();
                let b = p[var].clone();
                let combined: Vec<Rational> =
                    p.iter().zip(n).map(|(x, y)| &a * x + &b * y).collect();
                next.push(primitive(&combined));
            }
        }
        next.retain(|r| !is_zero_vec(r));
        next.sort();
        next.dedup();
        rows = remove_redundant(next, &eqs, h.dim)?;
    }

    let pick = |row: &Vec<Rational>| keep.iter().map(|&k| row[k].clone()).collect::<Vec<_>>();
    let mut out = HRep::new(keep.len());
    out.inequalities = rows.iter().map(pick).collect();
    out.equalities = eqs.iter().map(pick).collect();
    out.inequalities.sort();
    out.equalities.sort();
    Ok(out)
}

/// Drops inequalities implied by the remaining ones (and the equalities).
fn remove_redundant(
    mut rows: Vec<Vec<Rational>>,
    eqs: &[Vec<Rational>],
    dim: usize,
) -> Result<Vec<Vec<Rational>>, LpError> {
    let mut i = 0;
    while i < rows.len() {
        // max -candidate·x over the other rows, capped at 1: the cap is reached
        // exactly when some feasible x violates the candidate.
        let objective: Vec<Rational> = rows[i].iter().map(|x| -x).collect();
        let mut lp = LinearProgram::new(dim).maximize(objective.clone());
        for v in 0..dim {
            lp.set_bound(v, VarBound::Free);
        }
        for (j, row) in rows.iter().enumerate() {
            if j != i {
                lp.add_constraint(
                    row.iter().map(|x| -x).collect(),
                    Relation::Le,
                    Rational::zero(),
                );
            }
        }
        for row in eqs {
            lp.add_constraint(row.clone(), Relation::Eq, Rational::zero());
        }
        lp.add_constraint(objective, Relation::Le, Rational::one());
        match solve(&lp)? {
            LpOutcome::Optimal { value, .. } if value.is_zero() => {
                rows.remove(i);
            }
            _ => i += 1,
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_elimination() {
        // f - l >= 0, l >= 0  over (f, l)
        let mut h = HRep::new(2);
        h.inequalities = vec![v(&[1, -1]), v(&[0, 1])];
        let p = project_cone(&h, &[0]).unwrap();
        assert_eq!(p.inequalities, vec![v(&[1])]);
        assert!(p.equalities.is_empty());
    }

    #[test]
    fn pairwise_bounds() {
        // f1 - l >= 0, f2 + l >= 0, l >= 0 over (f1, f2, l)
        let mut h = HRep::new(3);
        h.inequalities = vec![v(&[1, 0, -1]), v(&[0, 1, 1]), v(&[0, 0, 1])];
        let p = project_cone(&h, &[0, 1]).unwrap();
        assert_eq!(p.inequalities, vec![v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn nothing_to_eliminate() {
        let mut h = HRep::new(2);
        h.inequalities = vec![v(&[0, 1]), v(&[1, 0])];
        let p = project_cone(&h, &[0, 1]).unwrap();
        assert_eq!(p, h);
    }

    #[test]
    fn equality_substitution() {
        // x = l, l >= 0, y - l >= 0 over (x, y, l): shadow x >= 0, y - x >= 0
        let mut h = HRep::new(3);
        h.inequalities = vec![v(&[0, 0, 1]), v(&[0, 1, -1])];
        h.equalities = vec![v(&[1, 0, -1])];
        let p = project_cone(&h, &[0, 1]).unwrap();
        assert_eq!(p.inequalities, vec![v(&[-1, 1]), v(&[1, 0])]);
    }
}
