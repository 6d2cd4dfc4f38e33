use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, Rational, Scalar};

/// Sparse polynomial `Σ c_ij x^i y^j` with integer coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (exp, c) in terms {
            p.add_term(exp, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: (u32, u32), c: BigInt) {
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Parses a polynomial written the way it is printed, e.g.
    /// `"y^2 - 2x^4 + 2x"`. `vars` names the first and second variable.
    pub fn parse(src: &str, vars: (char, char)) -> Result<Self, ExactError> {
        let bad = || ExactError::Parse(src.to_string());
        let s: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut p = Self::zero();
        let mut i = 0;
        while i < s.len() {
            let mut sign = BigInt::one();
            match s[i] {
                '+' => i += 1,
                '-' => {
                    sign = -sign;
                    i += 1;
                }
                _ if i > 0 => return Err(bad()),
                _ => {}
            }
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef = if i > start {
                s[start..i].iter().collect::<String>().parse::<BigInt>().map_err(|_| bad())?
            } else {
                BigInt::one()
            };
            let mut seen_factor = i > start;
            let (mut ex, mut ey) = (0u32, 0u32);
            while i < s.len() && s[i] != '+' && s[i] != '-' {
                if s[i] == '*' {
                    i += 1;
                    continue;
                }
                let var = s[i];
                if var != vars.0 && var != vars.1 {
                    return Err(bad());
                }
                i += 1;
                let mut e = 1u32;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let es = i;
                    while i < s.len() && s[i].is_ascii_digit() {
                        i += 1;
                    }
                    e = s[es..i].iter().collect::<String>().parse().map_err(|_| bad())?;
                }
                if var == vars.0 {
                    ex += e;
                } else {
                    ey += e;
                }
                seen_factor = true;
            }
            if !seen_factor {
                return Err(bad());
            }
            coef *= sign;
            p.add_term((ex, ey), coef);
        }
        Ok(p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * BigInt::from(i))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * BigInt::from(j))),
        )
    }

    /// Exact value at `(x, y)`: sparse Horner in `x` for each power of `y`,
    /// then Horner in `y`.
    pub fn eval<K: Scalar>(&self, x: &K, y: &K) -> K {
        let zero = x.lift(Rational::zero());
        let mut rows: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            rows.entry(j).or_default().push((i, c));
        }
        let mut acc = zero.clone();
        let mut prev: Option<u32> = None;
        for (&j, row) in rows.iter().rev() {
            if let Some(pj) = prev {
                acc = acc.mul(&y.powi(pj - j));
            }
            acc = acc.add(&horner_sparse(row, x));
            prev = Some(j);
        }
        match prev {
            Some(j) if j > 0 => acc.mul(&y.powi(j)),
            Some(_) => acc,
            None => zero,
        }
    }

    /// Substitutes an integer for the first variable.
    pub fn specialize_x(&self, x: &BigInt) -> UniPoly {
        let deg = self.degree_y() as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            coeffs[j as usize] += c * num_traits::pow(x.clone(), i as usize);
        }
        UniPoly::new(coeffs)
    }
}

fn horner_sparse<K: Scalar>(row: &[(u32, &BigInt)], x: &K) -> K {
    // row is sorted by ascending x-exponent
    let mut acc = x.lift(Rational::zero());
    let mut prev: Option<u32> = None;
    for &(i, c) in row.iter().rev() {
        if let Some(pi) = prev {
            acc = acc.mul(&x.powi(pi - i));
        }
        acc = acc.add(&x.lift(Rational::from_integer(c.clone())));
        prev = Some(i);
    }
    match prev {
        Some(i) if i > 0 => acc.mul(&x.powi(i)),
        _ => acc,
    }
}

impl BivarPoly {
    /// Renders with the given variable names, terms by descending total
    /// degree and then descending degree in the first variable.
    pub fn render(&self, vars: (char, char)) -> String {
        let mut out = String::new();
        self.write_terms(&mut out, vars).expect("writing to a String");
        out
    }

    fn write_terms(&self, f: &mut impl fmt::Write, vars: (char, char)) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (n, k) in keys.iter().enumerate() {
            let c = &self.terms[k];
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let monomial = k.0 + k.1 > 0;
            if !mag.is_one() || !monomial {
                write!(f, "{mag}")?;
            }
            for (var, e) in [(vars.0, k.0), (vars.1, k.1)] {
                match e {
                    0 => {}
                    1 => write!(f, "{var}")?,
                    _ => write!(f, "{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f, ('x', 'y'))
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense univariate integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, y: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
    }

    fn eval_i128(&self, small: &[i128], y: i128) -> Option<i128> {
        small.iter().rev().try_fold(0i128, |acc, &c| acc.checked_mul(y)?.checked_add(c))
    }

    /// Fujiwara's bound `2·max_k |a_{n-k}/a_n|^{1/k}`, rounded up to an
    /// integer: every complex root has modulus at most this.
    pub fn root_bound(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        let lead = self.coeffs[n].abs();
        let mut best = BigInt::zero();
        for k in 1..=n {
            let a = self.coeffs[n - k].abs();
            if a.is_zero() {
                continue;
            }
            // ceil(|a| / |lead|) ≥ |a/lead|, then ceil of its k-th root
            let ratio = (&a + &lead - BigInt::one()) / &lead;
            let mut r = ratio.nth_root(k as u32);
            if num_traits::pow(r.clone(), k) < ratio {
                r += 1;
            }
            best = best.max(r);
        }
        best * 2
    }

    /// All integer roots, ascending. The zero polynomial has none by
    /// convention; callers treat it separately.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // strip the root at 0
        let shift = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let reduced = UniPoly::new(self.coeffs[shift..].to_vec());
        if shift > 0 {
            roots.push(BigInt::zero());
        }
        if reduced.degree() == 0 {
            return roots;
        }
        let bound = reduced.root_bound();
        let small: Option<Vec<i128>> = reduced.coeffs.iter().map(|c| c.to_i128()).collect();
        match (bound.to_i64(), small) {
            (Some(b), Some(small)) => {
                for y in -b..=b {
                    if y == 0 {
                        continue;
                    }
                    let v = match reduced.eval_i128(&small, y as i128) {
                        Some(v) => v == 0,
                        None => reduced.eval(&BigInt::from(y)).is_zero(),
                    };
                    if v {
                        roots.push(BigInt::from(y));
                    }
                }
            }
            _ => {
                // huge bound: only divisors of the constant term can be roots
                let c0 = reduced.coeffs[0].abs();
                let mut d = BigInt::one();
                while &d * &d <= c0 {
                    if (&c0 % &d).is_zero() {
                        for cand in [d.clone(), &c0 / &d] {
                            for s in [cand.clone(), -cand] {
                                if reduced.eval(&s).is_zero() && !roots.contains(&s) {
                                    roots.push(s);
                                }
                            }
                        }
                    }
                    d += 1;
                }
            }
        }
        roots.sort();
        roots
    }
}
