use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

use super::PoissonBracket;

/// Biderivation determined by a table of generator brackets
/// `{x_i, x_j} = P_ij`, extended by the Leibniz rule:
/// `{f, g} = Σ_{i,j} ∂_i f · ∂_j g · P_ij`.
///
/// Nothing forces the table to satisfy the Jacobi identity, which makes this
/// the natural home for deliberately broken brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    nvars: usize,
    names: Vec<String>,
    entries: Vec<LaurentPoly>,
}

impl GeneratorTable {
    /// `upper` lists `(i, j, P_ij)` with `i < j`; unlisted pairs bracket to 0.
    pub fn new(names: Vec<String>, upper: Vec<(usize, usize, LaurentPoly)>) -> Result<Self> {
        let n = names.len();
        let mut entries = vec![LaurentPoly::zero(n); n * n];
        for (i, j, p) in upper {
            if i >= j || j >= n {
                return Err(Error::InvalidStructure(format!(
                    "bad generator pair ({i}, {j})"
                )));
            }
            if p.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: p.nvars(),
                });
            }
            entries[j * n + i] = p.neg();
            entries[i * n + j] = p;
        }
        Ok(GeneratorTable {
            nvars: n,
            names,
            entries,
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.nvars + j]
    }
}

impl PoissonBracket for GeneratorTable {
    fn arity(&self) -> usize {
        self.nvars
    }

    fn bracket(&self, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly> {
        let n = self.nvars;
        let df: Vec<LaurentPoly> = (0..n)
            .map(|i| f.partial_derivative(i))
            .collect::<Result<_>>()?;
        let dg: Vec<LaurentPoly> = (0..n)
            .map(|j| g.partial_derivative(j))
            .collect::<Result<_>>()?;
        let mut out = LaurentPoly::zero(n);
        for (i, fi) in df.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in dg.iter().enumerate() {
                let p = self.entry(i, j);
                if i == j || gj.is_zero() || p.is_zero() {
                    continue;
                }
                out = out.add(&fi.mul(gj)?.mul(p)?)?;
            }
        }
        Ok(out)
    }

    fn var_names(&self) -> Vec<String> {
        self.names.clone()
    }
}
