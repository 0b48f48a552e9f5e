//! Finite multivariate possibility spaces, scopes, cells and gambles.

use std::fmt;
use std::sync::Arc;

use ipalg_lp::rational::{format, int};
use ipalg_lp::{current_limits, LpError, Rational};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<String>,
}

/// An ordered list of variables with finite, named domains.
///
/// Cheap to clone; clones share the variable table.
#[derive(Clone)]
pub struct Space {
    variables: Arc<Vec<Variable>>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.variables, &other.variables) || self.variables == other.variables
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for v in self.variables.iter() {
            list.entry(&v.name, &v.domain);
        }
        list.finish()
    }
}

/// A set of variables of one space, stored as a bit mask over variable positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scope(u64);

impl Scope {
    pub const EMPTY: Scope = Scope(0);

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Scope {
        Scope(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Scope) -> Scope {
        Scope(self.0 | other.0)
    }

    pub fn intersection(self, other: Scope) -> Scope {
        Scope(self.0 & other.0)
    }

    pub fn without(self, index: usize) -> Scope {
        Scope(self.0 & !(1 << index))
    }

    pub fn is_subset(self, other: Scope) -> bool {
        self.0 & !other.0 == 0
    }

    /// Variable positions in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1 << i) != 0)
    }
}

/// One value index per variable of a scope, in the space's variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub Vec<usize>);

impl Space {
    /// Builds a space from `(name, domain)` pairs.
    pub fn new<N, V, D>(variables: impl IntoIterator<Item = (N, D)>) -> Result<Space>
    where
        N: Into<String>,
        V: Into<String>,
        D: IntoIterator<Item = V>,
    {
        let mut vars: Vec<Variable> = Vec::new();
        for (name, domain) in variables {
            let name = name.into();
            if vars.iter().any(|v| v.name == name) {
                return Err(Error::DuplicateVariable(name));
            }
            let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
            if domain.is_empty() {
                return Err(Error::EmptyDomain(name));
            }
            for (i, value) in domain.iter().enumerate() {
                if domain[..i].contains(value) {
                    return Err(Error::UnknownValue {
                        variable: name,
                        value: format!("{value} (duplicate)"),
                    });
                }
            }
            vars.push(Variable { name, domain });
        }
        if vars.len() > 64 {
            return Err(Error::TooManyVariables(vars.len()));
        }
        let space = Space {
            variables: Arc::new(vars),
        };
        space.cell_count(space.full_scope())?;
        Ok(space)
    }

    /// Binary variables with domain `{0, 1}`.
    pub fn binary(names: &[&str]) -> Space {
        Space::new(names.iter().map(|n| (*n, ["0", "1"]))).expect("valid binary space")
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn full_scope(&self) -> Scope {
        Scope::from_indices(0..self.variables.len())
    }

    pub fn scope<S: AsRef<str>>(&self, names: &[S]) -> Result<Scope> {
        let mut scope = Scope::EMPTY;
        for n in names {
            scope = scope.union(Scope::from_indices([self.variable_index(n.as_ref())?]));
        }
        Ok(scope)
    }

    pub fn scope_names(&self, scope: Scope) -> Vec<&str> {
        scope
            .indices()
            .filter_map(|i| self.variables.get(i))
            .map(|v| v.name.as_str())
            .collect()
    }

    /// `{X,Y}`-style rendering of a scope.
    pub fn describe(&self, scope: Scope) -> String {
        format!("{{{}}}", self.scope_names(scope).join(","))
    }

    fn check_scope(&self, scope: Scope) -> Result<()> {
        if scope.is_subset(self.full_scope()) {
            Ok(())
        } else {
            Err(Error::NotSubset {
                sub: format!("{:#b}", scope.bits()),
                sup: self.describe(self.full_scope()),
            })
        }
    }

    pub(crate) fn check_subset(&self, sub: Scope, sup: Scope) -> Result<()> {
        self.check_scope(sup)?;
        if sub.is_subset(sup) {
            Ok(())
        } else {
            Err(Error::NotSubset {
                sub: self.describe(sub),
                sup: self.describe(sup),
            })
        }
    }

    /// Number of cells of `Ω_scope`, subject to the `max_cells` guard.
    pub fn cell_count(&self, scope: Scope) -> Result<usize> {
        self.check_scope(scope)?;
        let limit = current_limits().max_cells;
        let count = scope.indices().fold(1usize, |acc, i| {
            acc.saturating_mul(self.variables[i].domain.len())
        });
        LpError::check("max_cells", limit, count)?;
        Ok(count)
    }

    /// Cells of `Ω_scope` in row-major order (first variable slowest).
    pub fn enumerate_cells(&self, scope: Scope) -> Result<Vec<Cell>> {
        let count = self.cell_count(scope)?;
        let sizes: Vec<usize> = scope
            .indices()
            .map(|i| self.variables[i].domain.len())
            .collect();
        let mut cells = Vec::with_capacity(count);
        let mut current = vec![0; sizes.len()];
        for _ in 0..count {
            cells.push(Cell(current.clone()));
            for k in (0..sizes.len()).rev() {
                current[k] += 1;
                if current[k] < sizes[k] {
                    break;
                }
                current[k] = 0;
            }
        }
        Ok(cells)
    }

    /// Row-major position of `cell` within `Ω_scope`.
    pub fn cell_index(&self, scope: Scope, cell: &Cell) -> Result<usize> {
        let vars: Vec<usize> = scope.indices().collect();
        if cell.0.len() != vars.len() {
            return Err(Error::WrongLength {
                expected: vars.len(),
                found: cell.0.len(),
            });
        }
        let mut index = 0;
        for (&v, &value) in vars.iter().zip(&cell.0) {
            let var = &self.variables[v];
            if value >= var.domain.len() {
                return Err(Error::UnknownValue {
                    variable: var.name.clone(),
                    value: value.to_string(),
                });
            }
            index = index * var.domain.len() + value;
        }
        Ok(index)
    }

    /// Parses a `a|0`-style label into a cell of `Ω_scope`.
    pub fn parse_cell(&self, scope: Scope, label: &str) -> Result<Cell> {
        let vars: Vec<usize> = scope.indices().collect();
        let parts: Vec<&str> = if label.is_empty() {
            Vec::new()
        } else {
            label.split('|').collect()
        };
        if parts.len() != vars.len() {
            return Err(Error::WrongLength {
                expected: vars.len(),
                found: parts.len(),
            });
        }
        let mut values = Vec::with_capacity(vars.len());
        for (&v, part) in vars.iter().zip(parts) {
            let var = &self.variables[v];
            let value =
                var.domain
                    .iter()
                    .position(|d| d == part)
                    .ok_or_else(|| Error::UnknownValue {
                        variable: var.name.clone(),
                        value: part.to_string(),
                    })?;
            values.push(value);
        }
        Ok(Cell(values))
    }

    /// Value labels of a cell joined by `|`.
    pub fn cell_label(&self, scope: Scope, cell: &Cell) -> String {
        scope
            .indices()
            .zip(&cell.0)
            .map(|(v, &value)| self.variables[v].domain[value].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    /// The space made of the variables of `scope` only.
    pub fn subspace(&self, scope: Scope) -> Result<Space> {
        self.check_scope(scope)?;
        if scope == self.full_scope() {
            return Ok(self.clone());
        }
        Ok(Space {
            variables: Arc::new(scope.indices().map(|i| self.variables[i].clone()).collect()),
        })
    }

    /// Projection of the cells of `Ω_from` onto the cells of `Ω_to`, for `to ⊆ from`.
    pub fn projection(&self, from: Scope, to: Scope) -> Result<Projection> {
        self.check_subset(to, from)?;
        let source_len = self.cell_count(from)?;
        let target_len = self.cell_count(to)?;
        let vars: Vec<usize> = from.indices().collect();
        let sizes: Vec<usize> = vars
            .iter()
            .map(|&v| self.variables[v].domain.len())
            .collect();
        // Stride of each source variable inside the target index (0 when dropped).
        let mut strides = vec![0; vars.len()];
        let mut stride = 1;
        for k in (0..vars.len()).rev() {
            if to.contains(vars[k]) {
                strides[k] = stride;
                stride *= sizes[k];
            }
        }
        let mut map = Vec::with_capacity(source_len);
        let mut current = vec![0; vars.len()];
        for _ in 0..source_len {
            map.push(current.iter().zip(&strides).map(|(c, s)| c * s).sum());
            for k in (0..vars.len()).rev() {
                current[k] += 1;
                if current[k] < sizes[k] {
                    break;
                }
                current[k] = 0;
            }
        }
        Ok(Projection { map, target_len })
    }
}

/// Cell map `Ω_R → Ω_S` induced by restricting cells to a sub-scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    map: Vec<usize>,
    target_len: usize,
}

impl Projection {
    pub fn source_len(&self) -> usize {
        self.map.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn image(&self, source: usize) -> usize {
        self.map[source]
    }

    /// Source cells grouped by their image.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target_len];
        for (i, &t) in self.map.iter().enumerate() {
            out[t].push(i);
        }
        out
    }

    /// `y ∘ π`: a target vector made constant on fibers.
    pub fn pullback(&self, values: &[Rational]) -> Vec<Rational> {
        self.map.iter().map(|&t| values[t].clone()).collect()
    }

    /// Sums a source vector over fibers (marginalization of masses).
    pub fn pushforward(&self, values: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.target_len];
        for (v, &t) in values.iter().zip(&self.map) {
            out[t] += v;
        }
        out
    }

    /// The factorization of `values` through the projection, if it is constant on fibers.
    pub fn factor(&self, values: &[Rational]) -> Option<Vec<Rational>> {
        let mut out: Vec<Option<&Rational>> = vec![None; self.target_len];
        for (v, &t) in values.iter().zip(&self.map) {
            match out[t] {
                None => out[t] = Some(v),
                Some(w) if w == v => {}
                Some(_) => return None,
            }
        }
        out.into_iter().map(|v| v.cloned()).collect()
    }
}

/// A rational-valued function on the cells of `Ω_scope`.
#[derive(Clone, PartialEq)]
pub struct Gamble {
    space: Space,
    scope: Scope,
    values: Vec<Rational>,
}

impl fmt::Debug for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.values.iter().map(format).collect();
        write!(
            f,
            "Gamble{}({})",
            self.space.describe(self.scope),
            values.join(", ")
        )
    }
}

impl Gamble {
    pub fn new(space: &Space, scope: Scope, values: Vec<Rational>) -> Result<Gamble> {
        let expected = space.cell_count(scope)?;
        if values.len() != expected {
            return Err(Error::WrongLength {
                expected,
                found: values.len(),
            });
        }
        Ok(Gamble {
            space: space.clone(),
            scope,
            values,
        })
    }

    /// A gamble on the full scope.
    pub fn on(space: &Space, values: Vec<Rational>) -> Result<Gamble> {
        Gamble::new(space, space.full_scope(), values)
    }

    /// Integer-valued gamble on the full scope.
    pub fn from_ints(space: &Space, values: &[i64]) -> Result<Gamble> {
        Gamble::on(space, values.iter().map(|&v| int(v)).collect())
    }

    pub fn constant(space: &Space, scope: Scope, c: Rational) -> Result<Gamble> {
        let n = space.cell_count(scope)?;
        Gamble::new(space, scope, vec![c; n])
    }

    /// The indicator of a set of cell indices of `Ω_scope`.
    pub fn indicator(space: &Space, scope: Scope, cells: &[usize]) -> Result<Gamble> {
        let n = space.cell_count(scope)?;
        let mut values = vec![Rational::zero(); n];
        for &c in cells {
            if c >= n {
                return Err(Error::WrongLength {
                    expected: n,
                    found: c + 1,
                });
            }
            values[c] = int(1);
        }
        Gamble::new(space, scope, values)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    /// Membership in `L+`: nonnegative and not identically zero.
    pub fn is_positive(&self) -> bool {
        self.is_nonnegative() && !self.is_zero()
    }

    pub fn min(&self) -> Rational {
        self.values
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max(&self) -> Rational {
        self.values
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn neg(&self) -> Gamble {
        Gamble {
            values: self.values.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    pub fn add_constant(&self, c: &Rational) -> Gamble {
        Gamble {
            values: self.values.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }

    pub fn is_measurable(&self, s: Scope) -> Result<bool> {
        let proj = self.space.projection(self.scope, s)?;
        Ok(proj.factor(&self.values).is_some())
    }

    /// Extends the gamble to the larger scope `r`, constant along the new variables.
    pub fn lift(&self, r: Scope) -> Result<Gamble> {
        let proj = self.space.projection(r, self.scope)?;
        Gamble::new(&self.space, r, proj.pullback(&self.values))
    }

    /// Restricts an `s`-measurable gamble to `Ω_s`.
    pub fn project_measurable(&self, s: Scope) -> Result<Gamble> {
        let proj = self.space.projection(self.scope, s)?;
        let values = proj
            .factor(&self.values)
            .ok_or_else(|| Error::NotMeasurable(self.space.describe(s)))?;
        Gamble::new(&self.space, s, values)
    }

    /// Reinterprets the gamble as a full-scope gamble on `target`, whose variables
    /// must be exactly the variables of this gamble's scope.
    pub fn rebase(&self, target: &Space) -> Result<Gamble> {
        let ours: Vec<&Variable> = self
            .scope
            .indices()
            .map(|i| &self.space.variables[i])
            .collect();
        if ours.len() != target.variables.len()
            || ours
                .iter()
                .zip(target.variables.iter())
                .any(|(a, b)| *a != b)
        {
            return Err(Error::SpaceMismatch);
        }
        Gamble::on(target, self.values.clone())
    }
}
