//! Finite semigroups given by explicit multiplication tables.

use thiserror::Error;

/// A finite semigroup: an ordered list of labels, a closed multiplication
/// table, and an optional two-sided unit. Associativity is checked
/// exhaustively at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    labels: Vec<String>,
    /// table[a * n + b] = index of the product ab
    table: Vec<usize>,
    unit: Option<usize>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("table entry ({row},{col}) references undeclared element {value}")]
    UndeclaredElement { row: usize, col: usize, value: usize },
    #[error("table has {got} rows/entries, expected {expected}")]
    BadShape { got: usize, expected: usize },
    #[error("table is not associative: ({a}{b}){c} = {lhs} but {a}({b}{c}) = {rhs}")]
    NonAssociativeTable {
        a: String,
        b: String,
        c: String,
        lhs: String,
        rhs: String,
    },
    #[error("declared unit {unit} fails the unit law at {witness}")]
    BadUnit { unit: String, witness: String },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
}

impl Semigroup {
    /// Builds and validates a semigroup. `table[a][b]` is the index of `ab`.
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        unit: Option<usize>,
    ) -> Result<Self, SemigroupError> {
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SemigroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n {
            return Err(SemigroupError::BadShape {
                got: table.len(),
                expected: n,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::BadShape {
                    got: row.len(),
                    expected: n,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(SemigroupError::UndeclaredElement { row: r, col: c, value: v });
                }
                flat.push(v);
            }
        }
        let sg = Semigroup {
            labels,
            table: flat,
            unit,
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = sg.product(sg.product(a, b), c);
                    let rhs = sg.product(a, sg.product(b, c));
                    if lhs != rhs {
                        return Err(SemigroupError::NonAssociativeTable {
                            a: sg.labels[a].clone(),
                            b: sg.labels[b].clone(),
                            c: sg.labels[c].clone(),
                            lhs: sg.labels[lhs].clone(),
                            rhs: sg.labels[rhs].clone(),
                        });
                    }
                }
            }
        }
        if let Some(u) = unit {
            if u >= n {
                return Err(SemigroupError::UndeclaredElement { row: u, col: u, value: u });
            }
            for a in 0..n {
                if sg.product(u, a) != a || sg.product(a, u) != a {
                    return Err(SemigroupError::BadUnit {
                        unit: sg.labels[u].clone(),
                        witness: sg.labels[a].clone(),
                    });
                }
            }
        }
        Ok(sg)
    }

    /// The one-element monoid.
    pub fn trivial() -> Self {
        Semigroup::new(vec!["1".to_string()], vec![vec![0]], Some(0)).unwrap()
    }

    /// The two-element monoid `{1, e}` with `e` idempotent.
    pub fn two_idempotent() -> Self {
        Semigroup::new(
            vec!["1".to_string(), "e".to_string()],
            vec![vec![0, 1], vec![1, 1]],
            Some(0),
        )
        .unwrap()
    }

    /// The two-element left-zero semigroup (`ab = a`); it has no unit.
    pub fn left_zero_pair() -> Self {
        Semigroup::new(
            vec!["x".to_string(), "y".to_string()],
            vec![vec![0, 0], vec![1, 1]],
            None,
        )
        .unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    #[inline]
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.labels.len() + b]
    }

    /// Product of a nonempty sequence of elements, left to right.
    pub fn product_seq(&self, elems: &[usize]) -> usize {
        assert!(!elems.is_empty(), "empty product needs a unit");
        elems[1..].iter().fold(elems[0], |acc, &e| self.product(acc, e))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.labels.len();
        (0..n)
            .map(|r| self.table[r * n..(r + 1) * n].to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_monoid_is_valid() {
        let sg = Semigroup::trivial();
        assert_eq!(sg.len(), 1);
        assert_eq!(sg.product(0, 0), 0);
        assert_eq!(sg.unit(), Some(0));
    }

    #[test]
    fn idempotent_two_element_monoid() {
        let sg = Semigroup::two_idempotent();
        assert_eq!(sg.product(1, 1), 1);
        assert_eq!(sg.product(0, 1), 1);
        assert_eq!(sg.product_seq(&[1, 0, 1]), 1);
    }

    #[test]
    fn nonassociative_table_is_rejected_with_witness() {
        // x*x = y, x*y = x, y*x = y, y*y = x; (xx)x = yx = y, x(xx) = xy = x
        let err = Semigroup::new(
            vec!["x".into(), "y".into()],
            vec![vec![1, 0], vec![1, 0]],
            None,
        )
        .unwrap_err();
        match err {
            SemigroupError::NonAssociativeTable { a, b, c, lhs, rhs } => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("x", "x", "x"));
                assert_ne!(lhs, rhs);
            }
            other => panic!("expected non-associativity, got {other}"),
        }
    }

    #[test]
    fn bad_unit_is_rejected() {
        let err = Semigroup::new(
            vec!["1".into(), "e".into()],
            vec![vec![0, 1], vec![1, 1]],
            Some(1),
        )
        .unwrap_err();
        assert!(matches!(err, SemigroupError::BadUnit { .. }));
    }

    #[test]
    fn left_zero_semigroup_has_no_unit_but_is_associative() {
        let sg = Semigroup::left_zero_pair();
        assert_eq!(sg.unit(), None);
        assert_eq!(sg.product(0, 1), 0);
    }
}
