use crate::error::{Error, Result};
use crate::f2::BitVector;

/// Dense row-major matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                left: bad.len(),
                right: cols,
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    /// Matrix-vector product `M·x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.cols,
            });
        }
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            cols: self.rows.len(),
            rows: (0..self.cols).map(|c| self.column(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_gf2(self)
    }
}

/// Row rank over GF(2) by Gaussian elimination.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    let mut basis = Eliminator::new(m.cols());
    for r in &m.rows {
        basis.push(r);
    }
    basis.rank()
}

/// Incremental Gaussian elimination over GF(2).
///
/// Vectors are pushed one at a time and tagged with consecutive variable
/// indices. The eliminator keeps an echelon basis of their span, records for
/// each basis vector which pushed vectors combine into it, and collects a
/// basis of the linear dependencies (the kernel of the map sending variable
/// `t` to the `t`-th pushed vector).
#[derive(Clone, Debug)]
pub struct Eliminator {
    dim: usize,
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
    combos: Vec<BitVector>,
    kernel: Vec<BitVector>,
    vars: usize,
}

impl Eliminator {
    pub fn new(dim: usize) -> Self {
        Eliminator {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            kernel: Vec::new(),
            vars: 0,
        }
    }

    /// Like [`Eliminator::new`] but with `vars` variable slots reserved, so
    /// that vectors can be pushed under arbitrary indices below `vars`.
    pub fn with_vars(dim: usize, vars: usize) -> Self {
        let mut e = Self::new(dim);
        e.vars = vars;
        e
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kernel(&self) -> &[BitVector] {
        &self.kernel
    }

    /// Pushes `v` as the next variable. Returns true if it enlarged the span.
    pub fn push(&mut self, v: &BitVector) -> bool {
        let var = self.vars;
        self.vars += 1;
        self.push_var(v, var)
    }

    /// Pushes `v` tagged with variable index `var` (must be `< vars` when
    /// created with [`Eliminator::with_vars`]).
    pub fn push_var(&mut self, v: &BitVector, var: usize) -> bool {
        assert_eq!(v.len(), self.dim, "vector length differs from eliminator dimension");
        let width = self.vars.max(var + 1);
        self.vars = width;
        let mut vec = v.clone();
        let mut combo = BitVector::zeros(width);
        combo.set(var, true);
        for ((b, &p), c) in self.basis.iter().zip(&self.pivots).zip(&self.combos) {
            if vec.get(p) {
                vec.xor_assign(b);
                combo.xor_assign(&c.resized(width));
            }
        }
        match vec.first_one() {
            Some(p) => {
                self.basis.push(vec);
                self.pivots.push(p);
                self.combos.push(combo);
                true
            }
            None => {
                self.kernel.push(combo);
                false
            }
        }
    }

    /// Canonical representative of `v` modulo the span. Linear in `v`.
    pub fn residual(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.residual(v).is_zero()
    }

    /// A combination of the pushed vectors (over `vars` variables) summing to
    /// `v`, if one exists.
    pub fn solve(&self, v: &BitVector) -> Option<BitVector> {
        let mut r = v.clone();
        let mut combo = BitVector::zeros(self.vars);
        for ((b, &p), c) in self.basis.iter().zip(&self.pivots).zip(&self.combos) {
            if r.get(p) {
                r.xor_assign(b);
                combo.xor_assign(&c.resized(self.vars));
            }
        }
        r.is_zero().then_some(combo)
    }

    /// The lexicographically smallest element of `x + kernel`.
    pub fn lex_min(&self, x: &BitVector) -> BitVector {
        lex_min_in_coset(x, &self.kernel)
    }
}

/// Lexicographically smallest element of the affine space `x + span(gens)`.
///
/// Reduces the generators to reduced row echelon form with pivots at their
/// first set position; clearing every pivot of `x` then yields the minimum.
pub fn lex_min_in_coset(x: &BitVector, gens: &[BitVector]) -> BitVector {
    let len = x.len();
    let mut rref: Vec<(usize, BitVector)> = Vec::new();
    for g in gens {
        let mut v = g.resized(len);
        for (p, b) in &rref {
            if v.get(*p) {
                v.xor_assign(b);
            }
        }
        if let Some(p) = v.first_one() {
            for (_, b) in rref.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            rref.push((p, v));
        }
    }
    rref.sort_by_key(|(p, _)| *p);
    let mut out = x.clone();
    for (p, b) in &rref {
        if out.get(*p) {
            out.xor_assign(b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let rows: Vec<BitVector> = rows.iter().map(|r| r.parse().unwrap()).collect();
        BitMatrix::from_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_gf2(&BitMatrix::identity(3)), 3);
        assert_eq!(rank_gf2(&m(&["1010", "1010"])), 1);
        assert_eq!(rank_gf2(&m(&["110", "011", "101"])), 2);
        assert_eq!(rank_gf2(&BitMatrix::zeros(0, 0)), 0);
        assert_eq!(rank_gf2(&BitMatrix::zeros(3, 5)), 0);
    }

    #[test]
    fn solve_and_kernel() {
        let mut e = Eliminator::new(3);
        for s in ["110", "011", "101"] {
            e.push(&s.parse().unwrap());
        }
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel().len(), 1);
        assert_eq!(e.kernel()[0].to_string(), "111");
        let target: BitVector = "101".parse().unwrap();
        let combo = e.solve(&target).unwrap();
        // the combination must actually reproduce the target
        let cols = ["110", "011", "101"];
        let mut acc = BitVector::zeros(3);
        for t in combo.iter_ones() {
            acc.xor_assign(&cols[t].parse().unwrap());
        }
        assert_eq!(acc, target);
        assert!(e.solve(&"001".parse().unwrap()).is_none());
        assert_eq!(e.lex_min(&"111".parse().unwrap()).to_string(), "000");
        assert_eq!(e.lex_min(&"100".parse().unwrap()).to_string(), "011");
    }

    #[test]
    fn residual_is_linear() {
        let mut e = Eliminator::new(4);
        e.push(&"1100".parse().unwrap());
        e.push(&"0110".parse().unwrap());
        let a: BitVector = "1011".parse().unwrap();
        let b: BitVector = "0101".parse().unwrap();
        assert_eq!(e.residual(&a.xor(&b)), e.residual(&a).xor(&e.residual(&b)));
        assert!(e.contains(&"1010".parse().unwrap()));
        assert!(!e.contains(&"0001".parse().unwrap()));
    }

    #[test]
    fn mul_vec_and_transpose() {
        let a = m(&["110", "011"]);
        assert_eq!(a.mul_vec(&"101".parse().unwrap()).unwrap().to_string(), "11");
        assert_eq!(a.transpose().rows(), 3);
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.mul_vec(&"10".parse().unwrap()).is_err());
    }
}
