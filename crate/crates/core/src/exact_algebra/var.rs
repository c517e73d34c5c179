//! Structured variable labels and sparse monomials.

use std::cmp::Ordering;
use std::fmt;

/// A structured variable label. All indices are 0-based.
///
/// The total order on variables is fixed: first by kind,
/// `X < T < Z < V < U < S`, then lexicographically by indices. The monomial
/// order (graded lex) is built on top of this order; only canonical storage
/// depends on it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    /// Matrix entry `x(i,j)` of the square matrix underlying Capelli/Cayley.
    X { i: u8, j: u8 },
    /// Homogeneous Grassmannian coordinate `t(a,b)`.
    T { a: u8, b: u8 },
    /// Entry `(row,col)` of the `slot`-th m×r matrix of the `block`-th block.
    Z { block: u8, slot: u8, row: u8, col: u8 },
    /// Entry `v(a,b)` of the orbit-reduction coordinates.
    V { a: u8, b: u8 },
    /// Auxiliary symbol `u(i,j)` (affine coordinates, constant matrices).
    U { i: u8, j: u8 },
    /// The formal power symbol: never differentiated.
    S,
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::X { i, j } => write!(f, "x({i},{j})"),
            VarId::T { a, b } => write!(f, "t({a},{b})"),
            VarId::Z { block, slot, row, col } => write!(f, "z({block};{slot};{row},{col})"),
            VarId::V { a, b } => write!(f, "v({a},{b})"),
            VarId::U { i, j } => write!(f, "u({i},{j})"),
            VarId::S => write!(f, "s"),
        }
    }
}

/// Sparse monomial: sorted `(variable, exponent)` pairs, exponents positive.
///
/// Ordered by graded lex: total degree first, then lexicographic comparison
/// of exponents in the `VarId` order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        // Merge duplicates.
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.exponent(v) > 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Whether `self` divides `other` (componentwise exponents).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// Quotient monomial `other / self`; caller must ensure divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        let pairs = other
            .0
            .iter()
            .map(|&(v, e)| (v, e - self.exponent(v)))
            .collect();
        Monomial::from_pairs(pairs)
    }

    /// Exponent decremented at `v`; `None` if `v` is absent.
    pub fn step_down(&self, v: VarId) -> Option<(u32, Monomial)> {
        let e = self.exponent(v);
        if e == 0 {
            return None;
        }
        let pairs = self
            .0
            .iter()
            .map(|&(w, we)| if w == v { (w, we - 1) } else { (w, we) })
            .collect();
        Some((e, Monomial::from_pairs(pairs)))
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lexicographic on sparse exponent vectors: the earliest variable with
        // differing exponent decides; a positive exponent beats a missing one.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
