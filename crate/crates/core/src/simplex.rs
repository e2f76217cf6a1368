//! Self-contained exact-rational simplex solver.
//!
//! Two-phase dense tableau with Bland's rule, so the weighted/not-weighted
//! decision never touches floating point and cannot cycle. The solver is
//! generic over an exact scalar: the enumeration hot path runs on checked
//! `i128` rationals and falls back to `BigRational` on overflow, which
//! keeps the result exact either way.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Exact field arithmetic with explicit overflow reporting. Every checked
/// operation returns `None` on overflow; `BigRational` never overflows.
pub trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_div(&self, other: &Self) -> Option<Self>;
    fn try_cmp(&self, other: &Self) -> Option<Ordering>;
    fn to_big_rational(&self) -> BigRational;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }
}

/// Reduced rational over `i128` with fully checked arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Q128 {
    num: i128,
    den: i128, // > 0
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q128 {
    fn reduced(num: i128, den: i128) -> Option<Q128> {
        if den == 0 {
            return None;
        }
        if num == 0 {
            return Some(Q128 { num: 0, den: 1 });
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
        // g divides den, whose magnitude is below 2^127, so it fits.
        let g = g as i128;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg()?;
            den = den.checked_neg()?;
        }
        Some(Q128 { num, den })
    }
}

impl Scalar for Q128 {
    fn zero() -> Self {
        Q128 { num: 0, den: 1 }
    }
    fn one() -> Self {
        Q128 { num: 1, den: 1 }
    }
    fn from_i64(v: i64) -> Self {
        Q128 { num: v as i128, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    fn is_positive(&self) -> bool {
        self.num > 0
    }
    fn is_negative(&self) -> bool {
        self.num < 0
    }
    fn neg(&self) -> Self {
        Q128 { num: -self.num, den: self.den }
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        let a = self.num.checked_mul(other.den)?;
        let b = other.num.checked_mul(self.den)?;
        Q128::reduced(a.checked_add(b)?, self.den.checked_mul(other.den)?)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.neg())
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        // Cross-reduce first so intermediate products stay small.
        let g1 = gcd_u128(self.num.unsigned_abs(), other.den.unsigned_abs()).max(1) as i128;
        let g2 = gcd_u128(other.num.unsigned_abs(), self.den.unsigned_abs()).max(1) as i128;
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Q128::reduced(num, den)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.num == 0 {
            return None;
        }
        self.checked_mul(&Q128 { num: other.den, den: other.num })
    }
    fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        let a = self.num.checked_mul(other.den)?;
        let b = other.num.checked_mul(self.den)?;
        Some(a.cmp(&b))
    }
    fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

/// Row sense in `A x ⋈ b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// A linear program `maximize c·x  s.t.  A x ⋈ b, x >= 0`, stated over
/// `i64` data and solvable with any [`Scalar`].
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<i64>,
    rows: Vec<(Vec<i64>, Sense, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

/// Arithmetic overflowed the fixed-width scalar; retry with `BigRational`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overflow;

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![0; num_vars], rows: Vec::new() }
    }

    pub fn set_objective(&mut self, var: usize, coeff: i64) {
        self.objective[var] = coeff;
    }

    pub fn add_row(&mut self, coeffs: Vec<i64>, sense: Sense, rhs: i64) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, sense, rhs));
    }

    /// Two-phase simplex on the fast fixed-width rationals, falling back to
    /// arbitrary precision if anything overflows.
    pub fn maximize(&self) -> LpResult {
        match self.maximize_with::<Q128>() {
            Ok(result) => result,
            Err(Overflow) => self
                .maximize_with::<BigRational>()
                .expect("BigRational arithmetic cannot overflow"),
        }
    }

    pub fn maximize_with<T: Scalar>(&self) -> Result<LpResult, Overflow> {
        Tableau::<T>::build(self).solve(&self.objective)
    }
}

struct Tableau<T> {
    /// `rows[r]` has `ncols + 1` entries; the last is the RHS.
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    num_structural: usize,
    first_artificial: usize,
    ncols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram) -> Tableau<T> {
        let m = lp.rows.len();
        let n = lp.num_vars;

        // Orient every row so the RHS is nonnegative, then lay out
        // slack/surplus and artificial columns.
        let oriented: Vec<(Vec<i64>, Sense, i64)> = lp
            .rows
            .iter()
            .map(|(coeffs, sense, rhs)| {
                if *rhs < 0 {
                    let flipped = match sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    };
                    (coeffs.iter().map(|c| -c).collect(), flipped, -rhs)
                } else {
                    (coeffs.clone(), *sense, *rhs)
                }
            })
            .collect();

        let num_slack = oriented.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
        let num_artificial = oriented.iter().filter(|(_, s, _)| *s != Sense::Le).count();
        let first_artificial = n + num_slack;
        let ncols = first_artificial + num_artificial;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_at = n;
        let mut art_at = first_artificial;
        for (coeffs, sense, rhs) in oriented {
            let mut row: Vec<T> = vec![T::zero(); ncols + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                row[j] = T::from_i64(c);
            }
            row[ncols] = T::from_i64(rhs);
            match sense {
                Sense::Le => {
                    row[slack_at] = T::one();
                    basis.push(slack_at);
                    slack_at += 1;
                }
                Sense::Ge => {
                    row[slack_at] = T::one().neg();
                    slack_at += 1;
                    row[art_at] = T::one();
                    basis.push(art_at);
                    art_at += 1;
                }
                Sense::Eq => {
                    row[art_at] = T::one();
                    basis.push(art_at);
                    art_at += 1;
                }
            }
            rows.push(row);
        }

        Tableau { rows, obj: Vec::new(), basis, num_structural: n, first_artificial, ncols }
    }

    /// Loads an objective row and prices out the current basis so basic
    /// columns have zero reduced cost.
    fn load_objective(&mut self, coeffs: &[T]) -> Result<(), Overflow> {
        let mut obj = vec![T::zero(); self.ncols + 1];
        obj[..coeffs.len()].clone_from_slice(coeffs);
        self.obj = obj;
        for r in 0..self.rows.len() {
            let b = self.basis[r];
            if !self.obj[b].is_zero() {
                let factor = self.obj[b].clone();
                for j in 0..=self.ncols {
                    let delta = factor.checked_mul(&self.rows[r][j]).ok_or(Overflow)?;
                    self.obj[j] = self.obj[j].checked_sub(&delta).ok_or(Overflow)?;
                }
            }
        }
        Ok(())
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<(), Overflow> {
        let inv = self.rows[row][col].clone();
        for j in 0..=self.ncols {
            self.rows[row][j] = self.rows[row][j].checked_div(&inv).ok_or(Overflow)?;
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for j in 0..=self.ncols {
                let delta = factor.checked_mul(&self.rows[row][j]).ok_or(Overflow)?;
                self.rows[r][j] = self.rows[r][j].checked_sub(&delta).ok_or(Overflow)?;
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for j in 0..=self.ncols {
                let delta = factor.checked_mul(&self.rows[row][j]).ok_or(Overflow)?;
                self.obj[j] = self.obj[j].checked_sub(&delta).ok_or(Overflow)?;
            }
        }
        self.basis[row] = col;
        Ok(())
    }

    /// Bland's rule: enter the lowest-index improving column; leave by the
    /// minimum ratio, ties broken by the lowest basic variable index.
    /// `Ok(true)` at optimality, `Ok(false)` on unboundedness.
    fn run(&mut self, allowed_cols: usize) -> Result<bool, Overflow> {
        loop {
            let entering = (0..allowed_cols).find(|&j| self.obj[j].is_positive());
            let Some(col) = entering else { return Ok(true) };
            let mut leave: Option<usize> = None;
            let mut best: Option<T> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][col].is_positive() {
                    continue;
                }
                let ratio =
                    self.rows[r][self.ncols].checked_div(&self.rows[r][col]).ok_or(Overflow)?;
                let better = match &best {
                    None => true,
                    Some(b) => match ratio.try_cmp(b).ok_or(Overflow)? {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[r] < self.basis[leave.unwrap()],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
            let Some(row) = leave else { return Ok(false) };
            self.pivot(row, col)?;
        }
    }

    fn objective_value(&self) -> T {
        self.obj[self.ncols].neg()
    }

    fn solve(mut self, objective: &[i64]) -> Result<LpResult, Overflow> {
        if self.first_artificial < self.ncols {
            // Phase 1: drive the artificial variables to zero.
            let mut phase1 = vec![T::zero(); self.ncols];
            for c in self.first_artificial..self.ncols {
                phase1[c] = T::one().neg();
            }
            self.load_objective(&phase1)?;
            let bounded = self.run(self.ncols)?;
            debug_assert!(bounded, "phase 1 is bounded by construction");
            if self.objective_value().is_negative() {
                return Ok(LpResult::Infeasible);
            }
            // Pivot any degenerate artificial out of the basis, or drop
            // its row when it is entirely redundant.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(col) => self.pivot(r, col)?,
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        // Phase 2 over the real columns only; artificials never re-enter.
        let real: Vec<T> = objective.iter().map(|&c| T::from_i64(c)).collect();
        self.load_objective(&real)?;
        if !self.run(self.first_artificial)? {
            return Ok(LpResult::Unbounded);
        }
        let mut x = vec![<BigRational as Zero>::zero(); self.num_structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                x[b] = self.rows[r][self.ncols].to_big_rational();
            }
        }
        Ok(LpResult::Optimal { value: self.objective_value().to_big_rational(), x })
    }
}
