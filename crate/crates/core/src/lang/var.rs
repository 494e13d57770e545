use std::fmt;
use std::sync::Arc;

/// A variable symbol with an optional multi-index, e.g. `x` or `x[1,2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    index: Vec<u32>,
}

impl Var {
    pub fn new(name: &str) -> Var {
        Var {
            name: Arc::from(name),
            index: Vec::new(),
        }
    }

    pub fn indexed(name: &str, index: &[u32]) -> Var {
        Var {
            name: Arc::from(name),
            index: index.to_vec(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> &[u32] {
        &self.index
    }

    /// Same index, different base name.
    pub fn renamed(&self, name: &str) -> Var {
        Var {
            name: Arc::from(name),
            index: self.index.clone(),
        }
    }

    /// The numeric suffix of a generated name `base$k`, if any.
    pub fn fresh_counter(&self) -> Option<u64> {
        let (_, tail) = self.name.rsplit_once('$')?;
        tail.parse().ok()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.index.is_empty() {
            f.write_str("[")?;
            for (k, i) in self.index.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Generator of variables in the reserved `base$k` namespace.
///
/// The counter starts above every `$k` suffix already present, so generated
/// names never collide with existing ones and the scheme is reproducible from
/// the formula text alone.
#[derive(Debug, Clone)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn starting_at(next: u64) -> Fresh {
        Fresh { next }
    }

    pub fn avoiding<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Fresh {
        let next = vars
            .into_iter()
            .filter_map(Var::fresh_counter)
            .map(|k| k + 1)
            .max()
            .unwrap_or(0);
        Fresh { next }
    }

    pub fn var(&mut self, base: &str) -> Var {
        let v = Var::new(&format!("{base}${}", self.next));
        self.next += 1;
        v
    }

    /// A fresh variable that keeps the multi-index of `like`.
    pub fn like(&mut self, like: &Var) -> Var {
        let base = like.name().split('$').next().unwrap_or("v");
        let v = Var::indexed(&format!("{base}${}", self.next), like.index());
        self.next += 1;
        v
    }

    pub fn counter(&self) -> u64 {
        self.next
    }
}

/// Row-major `rows x cols` matrix of variables `name[i,j]`, 1-based.
pub fn matrix_vars(name: &str, rows: usize, cols: usize) -> Vec<Var> {
    let mut out = Vec::with_capacity(rows * cols);
    for i in 1..=rows {
        for j in 1..=cols {
            out.push(Var::indexed(name, &[i as u32, j as u32]));
        }
    }
    out
}

/// `name[1] .. name[n]`.
pub fn vector_vars(name: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::indexed(name, &[i as u32])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_needs_full_index() {
        assert_eq!(Var::indexed("x", &[1, 2]), Var::indexed("x", &[1, 2]));
        assert_ne!(Var::indexed("x", &[1, 2]), Var::indexed("x", &[1]));
        assert_ne!(Var::new("x"), Var::indexed("x", &[1]));
    }

    #[test]
    fn fresh_skips_existing_suffixes() {
        let existing = [Var::new("w$4"), Var::new("x"), Var::new("c$1")];
        let mut fresh = Fresh::avoiding(existing.iter());
        assert_eq!(fresh.var("w"), Var::new("w$5"));
        assert_eq!(fresh.var("w"), Var::new("w$6"));
    }

    #[test]
    fn display_with_index() {
        assert_eq!(Var::indexed("x", &[1, 2]).to_string(), "x[1,2]");
        assert_eq!(Var::new("u").to_string(), "u");
    }
}
