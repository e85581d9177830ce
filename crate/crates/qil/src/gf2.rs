//! GF(2) linear algebra on bit-vector parity rows.
//!
//! A [`Gf2Span`] is kept in reduced row-echelon form at all times: rows are
//! sorted by pivot (lowest set bit, ascending) and each pivot column appears
//! in exactly one row. This makes span equality a plain list equality and
//! membership queries a single reduction pass.

/// Bit-vector over qubit indices; bit `i` set means qubit `i` participates.
pub type Mask = u64;

/// A single parity constraint: XOR of the member variables equals `rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub members: Mask,
    pub rhs: bool,
}

impl Row {
    pub fn new(members: Mask, rhs: bool) -> Self {
        Row { members, rhs }
    }

    /// Lowest set bit, the pivot column once the row lives in a reduced span.
    pub fn pivot(&self) -> Mask {
        self.members & self.members.wrapping_neg()
    }
}

/// A `0 = 1` row surfaced during reduction. Never a physical state; always a
/// caller bug.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contradiction;

/// A set of independent parity rows in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct Gf2Span {
    rows: Vec<Row>,
}

impl Gf2Span {
    pub fn new() -> Self {
        Gf2Span { rows: Vec::new() }
    }

    /// Reduce an arbitrary row list to RREF. Dependent rows vanish; a
    /// dependent row with an odd right-hand side is a contradiction.
    pub fn from_rows<I: IntoIterator<Item = Row>>(rows: I) -> Result<Self, Contradiction> {
        let mut span = Gf2Span::new();
        for row in rows {
            span.adjoin(row)?;
        }
        Ok(span)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Union of all member sets.
    pub fn support(&self) -> Mask {
        self.rows.iter().fold(0, |acc, r| acc | r.members)
    }

    /// Reduce `row` against the span. The returned members are zero exactly
    /// when `row.members` lies in the span of the stored member sets.
    pub fn reduce(&self, mut row: Row) -> Row {
        // Rows are sorted by ascending pivot and reduction only ever
        // introduces bits above the current pivot, so one pass suffices.
        for r in &self.rows {
            if row.members & r.pivot() != 0 {
                row.members ^= r.members;
                row.rhs ^= r.rhs;
            }
        }
        row
    }

    /// Span membership: `Some(rhs)` when `members` is a GF(2) combination of
    /// stored rows, with `rhs` the XOR of the combined right-hand sides.
    pub fn forced_rhs(&self, members: Mask) -> Option<bool> {
        let r = self.reduce(Row::new(members, false));
        if r.members == 0 {
            Some(r.rhs)
        } else {
            None
        }
    }

    /// Insert a row, maintaining RREF. A dependent row is dropped; a
    /// dependent row whose rhs disagrees is a contradiction.
    pub fn adjoin(&mut self, row: Row) -> Result<(), Contradiction> {
        let reduced = self.reduce(row);
        if reduced.members == 0 {
            return if reduced.rhs {
                Err(Contradiction)
            } else {
                Ok(())
            };
        }
        let pivot = reduced.pivot();
        // Back-substitute the new pivot out of existing rows.
        for r in &mut self.rows {
            if r.members & pivot != 0 {
                r.members ^= reduced.members;
                r.rhs ^= reduced.rhs;
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|r| r.pivot() > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, reduced);
        Ok(())
    }

    /// Generating set of the subspace whose combinations have coefficient 0
    /// on every variable in `mask`.
    pub fn eliminate(&self, mask: Mask) -> Gf2Span {
        let mut rows = self.rows.clone();
        let mut bits = mask & self.support();
        while bits != 0 {
            let bit = bits & bits.wrapping_neg();
            bits ^= bit;
            if let Some(idx) = rows.iter().position(|r| r.members & bit != 0) {
                let pivot_row = rows.remove(idx);
                for r in &mut rows {
                    if r.members & bit != 0 {
                        r.members ^= pivot_row.members;
                        r.rhs ^= pivot_row.rhs;
                    }
                }
            }
        }
        Gf2Span::from_rows(rows).expect("eliminating from an independent set cannot contradict")
    }

    /// Generating set of the subspace supported entirely inside `mask`.
    pub fn restrict_within(&self, mask: Mask) -> Gf2Span {
        self.eliminate(self.support() & !mask)
    }

    /// Every element of the span (2^rank rows, the zero row included).
    /// Desk-scale only; guarded against blowup.
    pub fn elements(&self) -> Vec<Row> {
        assert!(self.rank() <= 24, "span enumeration limited to rank 24");
        let mut out = vec![Row::new(0, false)];
        for r in &self.rows {
            let prev = out.len();
            for k in 0..prev {
                let mut e = out[k];
                e.members ^= r.members;
                e.rhs ^= r.rhs;
                out.push(e);
            }
        }
        out
    }

    /// The same span with variables `a` and `b` transposed, re-reduced.
    pub fn swap_vars(&self, a: usize, b: usize) -> Gf2Span {
        let rows = self.rows.iter().map(|r| {
            let mut m = r.members;
            let ba = (m >> a) & 1;
            let bb = (m >> b) & 1;
            if ba != bb {
                m ^= (1 << a) | (1 << b);
            }
            Row::new(m, r.rhs)
        });
        Gf2Span::from_rows(rows).expect("transposition preserves independence")
    }
}

/// Ascending indices of the set bits of `mask`.
pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    (0..Mask::BITS as usize).filter(move |i| mask & (1 << i) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(bits: &[usize]) -> Mask {
        bits.iter().fold(0, |acc, b| acc | (1 << b))
    }

    #[test]
    fn rref_is_canonical() {
        let a =
            Gf2Span::from_rows([Row::new(m(&[0, 1]), false), Row::new(m(&[1, 2]), true)]).unwrap();
        let b =
            Gf2Span::from_rows([Row::new(m(&[0, 2]), true), Row::new(m(&[1, 2]), true)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contradiction_detected() {
        let mut span = Gf2Span::new();
        span.adjoin(Row::new(m(&[0, 1]), false)).unwrap();
        assert_eq!(span.adjoin(Row::new(m(&[0, 1]), true)), Err(Contradiction));
    }

    #[test]
    fn forced_rhs_combines() {
        let span =
            Gf2Span::from_rows([Row::new(m(&[0, 1]), false), Row::new(m(&[1, 2]), true)]).unwrap();
        assert_eq!(span.forced_rhs(m(&[0, 2])), Some(true));
        assert_eq!(span.forced_rhs(m(&[0])), None);
    }

    #[test]
    fn eliminate_drops_rank_by_one() {
        let span =
            Gf2Span::from_rows([Row::new(m(&[0, 1]), false), Row::new(m(&[1, 2]), false)]).unwrap();
        let reduced = span.eliminate(m(&[2]));
        assert_eq!(reduced.rank(), 1);
        assert_eq!(reduced.forced_rhs(m(&[0, 1])), Some(false));
    }

    #[test]
    fn restrict_within_splits_product() {
        let span =
            Gf2Span::from_rows([Row::new(m(&[0, 1]), false), Row::new(m(&[2]), true)]).unwrap();
        let inside = span.restrict_within(m(&[2]));
        assert_eq!(inside.rank(), 1);
        assert_eq!(inside.forced_rhs(m(&[2])), Some(true));
    }
}
