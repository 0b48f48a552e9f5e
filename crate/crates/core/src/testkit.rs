//! Random instance generators for property tests.

use ipalg_lp::rational::int;
use ipalg_lp::Rational;
use rand::Rng;

use crate::cone::ConePiece;
use crate::prevision::LowerPrevision;
use crate::space::{Gamble, Scope, Space};

/// Binary variables `X0, X1, …`.
pub fn binary_space(vars: usize) -> Space {
    let names: Vec<String> = (0..vars).map(|i| format!("X{i}")).collect();
    Space::new(names.iter().map(|n| (n.as_str(), ["0", "1"]))).expect("small binary space")
}

pub fn random_scope<R: Rng>(rng: &mut R, space: &Space) -> Scope {
    Scope::from_indices((0..space.num_variables()).filter(|_| rng.gen_bool(0.5)))
}

pub fn random_values<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

/// A full-scope gamble with integer values in `lo..=hi`.
pub fn random_gamble<R: Rng>(rng: &mut R, space: &Space, lo: i64, hi: i64) -> Gamble {
    let n = space.cell_count(space.full_scope()).expect("small space");
    Gamble::on(space, random_values(rng, n, lo, hi)).expect("length matches")
}

/// An `s`-measurable full-scope gamble.
pub fn random_measurable<R: Rng>(rng: &mut R, space: &Space, s: Scope, lo: i64, hi: i64) -> Gamble {
    let n = space.cell_count(s).expect("small space");
    Gamble::new(space, s, random_values(rng, n, lo, hi))
        .and_then(|g| g.lift(space.full_scope()))
        .expect("lift to full scope")
}

/// The natural extension of up to `max_gens` random gambles in `-3..=3`
/// (possibly the contradiction).
pub fn random_generated<R: Rng>(rng: &mut R, space: &Space, max_gens: usize) -> ConePiece {
    let k = rng.gen_range(1..=max_gens);
    let gens: Vec<Gamble> = (0..k).map(|_| random_gamble(rng, space, -3, 3)).collect();
    ConePiece::from_assessments(space, &gens).expect("valid assessments")
}

/// A coherent piece built from random gambles; never the contradiction.
pub fn random_coherent<R: Rng>(rng: &mut R, space: &Space, max_gens: usize) -> ConePiece {
    loop {
        let d = random_generated(rng, space, max_gens);
        if !d.is_contradiction() {
            return d;
        }
    }
}

/// A coherent lower prevision from random almost-desirable gambles.
pub fn random_prevision<R: Rng>(rng: &mut R, space: &Space, max_gens: usize) -> LowerPrevision {
    loop {
        let k = rng.gen_range(1..=max_gens);
        let gens: Vec<Gamble> = (0..k).map(|_| random_gamble(rng, space, -3, 3)).collect();
        let p = LowerPrevision::from_gambles(space, &gens).expect("valid assessments");
        if !p.is_null() {
            return p;
        }
    }
}

/// Brute-force references that share no code with the library's solvers.
pub mod oracle {
    use ipalg_lp::Rational;
    use num_traits::{One, Signed, Zero};

    fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = a.len();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            b.swap(col, p);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[col][col];
                    let pivot = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                    let d = &f * &b[col];
                    b[r] -= d;
                }
            }
        }
        Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
    }

    fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
        fn rec(
            start: usize,
            n: usize,
            k: usize,
            cur: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if cur.len() == k {
                f(cur);
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, k, cur, f);
                cur.pop();
            }
        }
        rec(0, n, k, &mut Vec::new(), f);
    }

    fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Vertices of `{p ≥ 0, Σp = 1, p·g ≥ 0 for all g}` by trying every choice of
    /// `n − 1` active inequalities.
    pub fn credal_vertices(gens: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        rows.extend(gens.iter().cloned());
        let mut out = Vec::new();
        subsets(rows.len(), n - 1, &mut |active| {
            let mut a: Vec<Vec<Rational>> = active.iter().map(|&i| rows[i].clone()).collect();
            let mut b = vec![Rational::zero(); n - 1];
            a.push(vec![Rational::one(); n]);
            b.push(Rational::one());
            if let Some(p) = solve_square(a, b) {
                if rows.iter().all(|r| !dot(r, &p).is_negative()) {
                    out.push(p);
                }
            }
        });
        out.sort();
        out.dedup();
        out
    }

    /// `min_p p·f` over the vertices; `None` when there are none.
    pub fn lower_envelope(vertices: &[Vec<Rational>], f: &[Rational]) -> Option<Rational> {
        vertices.iter().map(|p| dot(p, f)).min()
    }

    /// Lower prevision of the extraction to a scope, given the credal vertices of
    /// the piece and the projection map of cells: `min_v Σ_y v(fiber y) · min_{fiber y} f`.
    pub fn extracted_lower(
        vertices: &[Vec<Rational>],
        image: &[usize],
        f: &[Rational],
    ) -> Option<Rational> {
        let m = image.iter().max().map_or(0, |&x| x + 1);
        let mut fiber_min: Vec<Option<Rational>> = vec![None; m];
        for (w, &y) in image.iter().enumerate() {
            let cur = fiber_min[y].take();
            fiber_min[y] = Some(match cur {
                Some(c) if c <= f[w] => c,
                _ => f[w].clone(),
            });
        }
        vertices
            .iter()
            .map(|v| {
                let mut marg = vec![Rational::zero(); m];
                for (w, &y) in image.iter().enumerate() {
                    marg[y] += &v[w];
                }
                marg.iter()
                    .zip(&fiber_min)
                    .map(|(q, fm)| q * fm.clone().unwrap_or_else(Rational::zero))
                    .sum::<Rational>()
            })
            .min()
    }
}
