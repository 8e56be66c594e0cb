//! Canonical sparse multivariate polynomials over GF(p) and polynomial
//! maps, including full expansion of composed maps into sparse form.
//!
//! Canonical form is normative for serialization and fixture diffs:
//! no zero coefficients, at most one term per monomial, terms ordered by
//! ascending total degree with ties broken by ascending lexicographic
//! comparison of the exponent tuples.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldVector, MAX_MODULUS};

/// Default cap on the number of terms a single polynomial may reach
/// during expansion. Exceeding it is a clean error, never an OOM; the
/// degree of expanded group laws grows like d^n, so the guard is load
/// bearing.
pub const DEFAULT_TERM_BUDGET: usize = 5_000_000;

/// Exponent tuple of fixed length (one slot per variable).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The single variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Canonical storage order: ascending total degree, then ascending
    /// lexicographic comparison of the exponent tuples.
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// One nonzero term of a sparse polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: u64,
    pub mono: Monomial,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: u64,
    e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    p: u64,
    nvars: usize,
    terms: Vec<TermRepr>,
}

/// A canonical sparse multivariate polynomial over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct SparsePoly {
    p: u64,
    nvars: usize,
    terms: Vec<Term>,
}

impl From<SparsePoly> for PolyRepr {
    fn from(poly: SparsePoly) -> PolyRepr {
        PolyRepr {
            p: poly.p,
            nvars: poly.nvars,
            terms: poly
                .terms
                .into_iter()
                .map(|t| TermRepr {
                    c: t.coeff,
                    e: t.mono.0,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyRepr> for SparsePoly {
    type Error = Error;
    fn try_from(repr: PolyRepr) -> Result<SparsePoly> {
        if repr.p < 2 || repr.p >= MAX_MODULUS {
            return Err(Error::InvalidInput(format!("bad modulus {}", repr.p)));
        }
        SparsePoly::from_terms(
            repr.p,
            repr.nvars,
            repr.terms.into_iter().map(|t| (Monomial(t.e), t.c)),
        )
    }
}

impl SparsePoly {
    pub fn zero(p: u64, nvars: usize) -> Self {
        SparsePoly {
            p,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: u64) -> Self {
        let c = c % p;
        let mut poly = SparsePoly::zero(p, nvars);
        if c != 0 {
            poly.terms.push(Term {
                coeff: c,
                mono: Monomial::constant(nvars),
            });
        }
        poly
    }

    /// The single variable with 0-based index `i`.
    pub fn var(p: u64, nvars: usize, i: usize) -> Self {
        SparsePoly {
            p,
            nvars,
            terms: vec![Term {
                coeff: 1 % p,
                mono: Monomial::var(nvars, i),
            }],
        }
    }

    /// Builds a canonical polynomial from arbitrary (monomial, coefficient)
    /// pairs: reduces coefficients, merges duplicates, drops zeros, sorts.
    pub fn from_terms(
        p: u64,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (mono, c) in terms {
            if mono.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: mono.nvars(),
                });
            }
            let entry = map.entry(mono).or_insert(0);
            *entry = (*entry + c % p) % p;
        }
        Ok(SparsePoly::from_map(p, nvars, map))
    }

    /// The affine functional `coeffs . x + constant`.
    pub fn from_affine(coeffs: &FieldVector, constant: FieldElement) -> Self {
        let p = coeffs.modulus();
        let nvars = coeffs.len();
        let mut terms: Vec<(Monomial, u64)> = Vec::new();
        if !constant.is_zero() {
            terms.push((Monomial::constant(nvars), constant.value()));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((Monomial::var(nvars, i), c.value()));
            }
        }
        SparsePoly::from_terms(p, nvars, terms).expect("arity consistent by construction")
    }

    fn from_map(p: u64, nvars: usize, map: BTreeMap<Monomial, u64>) -> Self {
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        terms.sort_by(|a, b| a.mono.canonical_cmp(&b.mono));
        SparsePoly { p, nvars, terms }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_constant())
    }

    /// Constant coefficient (zero if absent).
    pub fn constant_term(&self) -> FieldElement {
        let c = self
            .terms
            .first()
            .filter(|t| t.mono.is_constant())
            .map_or(0, |t| t.coeff);
        FieldElement::new(c, self.p)
    }

    /// Max total degree over stored terms; the zero polynomial reports
    /// the distinguished value -1 so degree-bound tests cannot pass
    /// vacuously.
    pub fn total_degree(&self) -> i64 {
        // canonical order is ascending degree, so the last term is maximal
        self.terms
            .last()
            .map_or(-1, |t| t.mono.total_degree() as i64)
    }

    fn check_compat(&self, other: &SparsePoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compat(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compat(other)?;
        Ok(self.merge(other, true))
    }

    /// Merge-join of two canonically sorted term lists.
    fn merge(&self, other: &SparsePoly, negate_other: bool) -> SparsePoly {
        let p = self.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let pick = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.mono.canonical_cmp(&b.mono),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match pick {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let t = &other.terms[j];
                    let c = if negate_other { (p - t.coeff) % p } else { t.coeff };
                    if c != 0 {
                        out.push(Term {
                            coeff: c,
                            mono: t.mono.clone(),
                        });
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let b = if negate_other {
                        (p - other.terms[j].coeff) % p
                    } else {
                        other.terms[j].coeff
                    };
                    let c = (self.terms[i].coeff + b) % p;
                    if c != 0 {
                        out.push(Term {
                            coeff: c,
                            mono: self.terms[i].mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparsePoly {
            p,
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn neg(&self) -> SparsePoly {
        let p = self.p;
        SparsePoly {
            p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: p - t.coeff,
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> SparsePoly {
        assert_eq!(c.modulus(), self.p, "modulus mismatch");
        if c.is_zero() {
            return SparsePoly::zero(self.p, self.nvars);
        }
        let mut map = BTreeMap::new();
        for t in &self.terms {
            let v = (t.coeff as u128 * c.value() as u128 % self.p as u128) as u64;
            if v != 0 {
                map.insert(t.mono.clone(), v);
            }
        }
        SparsePoly::from_map(self.p, self.nvars, map)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.mul_budgeted(other, DEFAULT_TERM_BUDGET)
    }

    pub fn mul_budgeted(&self, other: &SparsePoly, budget: usize) -> Result<SparsePoly> {
        self.check_compat(other)?;
        let map = mul_raw(&self.terms, &other.terms, self.p, budget)?;
        Ok(SparsePoly::from_map(self.p, self.nvars, map))
    }

    /// Direct exact evaluation with per-variable power caching.
    pub fn evaluate(&self, point: &FieldVector) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        if point.modulus() != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: point.modulus(),
            });
        }
        let p = self.p;
        // powers[i][e] = point_i^e, filled on demand
        let mut powers: Vec<Vec<u64>> = vec![vec![1 % p]; self.nvars];
        let mut acc: u128 = 0;
        for t in &self.terms {
            let mut v = t.coeff as u128;
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next =
                        (*cache.last().unwrap() as u128 * point.get(i).value() as u128
                            % p as u128) as u64;
                    cache.push(next);
                }
                v = v * cache[e as usize] as u128 % p as u128;
            }
            acc = (acc + v) % p as u128;
        }
        Ok(FieldElement::new(acc as u64, p))
    }

    /// Re-homes the polynomial in a wider variable space, shifting every
    /// variable index up by `offset`.
    pub fn embed(&self, new_nvars: usize, offset: usize) -> Result<SparsePoly> {
        if offset + self.nvars > new_nvars {
            return Err(Error::ArityMismatch {
                expected: new_nvars,
                got: offset + self.nvars,
            });
        }
        let terms = self.terms.iter().map(|t| {
            let mut e = vec![0u32; new_nvars];
            e[offset..offset + self.nvars].copy_from_slice(t.mono.exponents());
            Term {
                coeff: t.coeff,
                mono: Monomial(e),
            }
        });
        Ok(SparsePoly {
            p: self.p,
            nvars: new_nvars,
            terms: terms.collect(),
        })
        // canonical order is preserved: the shift leaves both the total
        // degree and the relative lexicographic order of tuples intact
    }

    /// Exchanges the first and second halves of the variable block.
    pub fn block_swap(&self) -> Result<SparsePoly> {
        if self.nvars % 2 != 0 {
            return Err(Error::ArityMismatch {
                expected: self.nvars + 1,
                got: self.nvars,
            });
        }
        let n = self.nvars / 2;
        let mut map = BTreeMap::new();
        for t in &self.terms {
            let e = t.mono.exponents();
            let mut swapped = Vec::with_capacity(self.nvars);
            swapped.extend_from_slice(&e[n..]);
            swapped.extend_from_slice(&e[..n]);
            map.insert(Monomial(swapped), t.coeff);
        }
        Ok(SparsePoly::from_map(self.p, self.nvars, map))
    }

    /// Renders canonical text: terms joined by ` + `, each
    /// `c*xI^E*...` with coefficients in `[0, p)` and `^1` omitted.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form (tolerant of missing `1*`
    /// coefficients and extra whitespace).
    pub fn parse(input: &str, p: u64, nvars: usize) -> Result<SparsePoly> {
        let input = input.trim();
        if input == "0" {
            return Ok(SparsePoly::zero(p, nvars));
        }
        let mut terms = Vec::new();
        for chunk in input.split('+') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(Error::InvalidInput("empty term".into()));
            }
            let mut coeff: Option<u64> = None;
            let mut exps = vec![0u32; nvars];
            for factor in chunk.split('*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.trim().parse::<u32>().map_err(|_| {
                            Error::InvalidInput(format!("bad exponent in {factor:?}"))
                        })?),
                        None => (rest, 1),
                    };
                    let idx: usize = var.trim().parse().map_err(|_| {
                        Error::InvalidInput(format!("bad variable in {factor:?}"))
                    })?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::InvalidInput(format!(
                            "variable x{idx} out of range 1..={nvars}"
                        )));
                    }
                    exps[idx - 1] += exp;
                } else {
                    let c: u64 = factor.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad coefficient {factor:?}"))
                    })?;
                    coeff = Some(match coeff {
                        None => c % p,
                        Some(prev) => (prev as u128 * c as u128 % p as u128) as u64,
                    });
                }
            }
            terms.push((Monomial(exps), coeff.unwrap_or(1)));
        }
        SparsePoly::from_terms(p, nvars, terms)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", t.coeff)?;
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Raw term-list product accumulated into a map, with budget guard.
fn mul_raw(
    a: &[Term],
    b: &[Term],
    p: u64,
    budget: usize,
) -> Result<BTreeMap<Monomial, u64>> {
    let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
    for ta in a {
        for tb in b {
            let c = (ta.coeff as u128 * tb.coeff as u128 % p as u128) as u64;
            if c == 0 {
                continue;
            }
            let mono = ta.mono.mul(&tb.mono);
            let entry = map.entry(mono).or_insert(0);
            *entry = (*entry + c) % p;
        }
        if map.len() > budget {
            return Err(Error::TermBudgetExceeded {
                budget,
                reached: map.len(),
            });
        }
    }
    Ok(map)
}

/// A tuple of sparse polynomials acting as a map `A^m -> A^n`; all
/// components share the input arity `m` and the modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    in_vars: usize,
    polys: Vec<SparsePoly>,
}

impl PolyMap {
    pub fn new(in_vars: usize, polys: Vec<SparsePoly>) -> Result<Self> {
        let Some(first) = polys.first() else {
            return Err(Error::InvalidInput("polynomial map needs components".into()));
        };
        let p = first.modulus();
        for poly in &polys {
            if poly.nvars() != in_vars {
                return Err(Error::ArityMismatch {
                    expected: in_vars,
                    got: poly.nvars(),
                });
            }
            if poly.modulus() != p {
                return Err(Error::ModulusMismatch {
                    left: p,
                    right: poly.modulus(),
                });
            }
        }
        Ok(PolyMap { in_vars, polys })
    }

    /// Infers the input arity from the components.
    pub fn from_polys(polys: Vec<SparsePoly>) -> Result<Self> {
        let in_vars = polys
            .first()
            .ok_or_else(|| Error::InvalidInput("polynomial map needs components".into()))?
            .nvars();
        PolyMap::new(in_vars, polys)
    }

    pub fn identity(p: u64, n: usize) -> Self {
        PolyMap {
            in_vars: n,
            polys: (0..n).map(|i| SparsePoly::var(p, n, i)).collect(),
        }
    }

    pub fn in_vars(&self) -> usize {
        self.in_vars
    }

    pub fn out_len(&self) -> usize {
        self.polys.len()
    }

    pub fn modulus(&self) -> u64 {
        self.polys[0].modulus()
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.polys
    }

    pub fn component(&self, i: usize) -> &SparsePoly {
        &self.polys[i]
    }

    pub fn is_identity(&self) -> bool {
        self.in_vars == self.polys.len()
            && self
                .polys
                .iter()
                .enumerate()
                .all(|(i, poly)| *poly == SparsePoly::var(self.modulus(), self.in_vars, i))
    }

    /// Max total degree over components (-1 when all components vanish).
    pub fn total_degree(&self) -> i64 {
        self.polys.iter().map(|p| p.total_degree()).max().unwrap_or(-1)
    }

    pub fn evaluate(&self, point: &FieldVector) -> Result<FieldVector> {
        let mut out = FieldVector::zeros(self.modulus(), self.polys.len());
        for (i, poly) in self.polys.iter().enumerate() {
            out.set(i, poly.evaluate(point)?);
        }
        Ok(out)
    }
}

/// Fully expands the composition `outer(inner(x))` into canonical sparse
/// form: the expansion operator on a composed pair of maps.
pub fn expand(outer: &PolyMap, inner: &PolyMap, budget: usize) -> Result<PolyMap> {
    if outer.in_vars() != inner.out_len() {
        return Err(Error::ArityMismatch {
            expected: outer.in_vars(),
            got: inner.out_len(),
        });
    }
    if outer.modulus() != inner.modulus() {
        return Err(Error::ModulusMismatch {
            left: outer.modulus(),
            right: inner.modulus(),
        });
    }
    if inner.is_identity() {
        return Ok(outer.clone());
    }
    let polys = outer
        .polys
        .iter()
        .map(|f| substitute(f, inner.components(), inner.in_vars(), budget))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(inner.in_vars(), polys)
}

/// Substitutes `inner[j]` for variable `j` of `f`, fully expanding the
/// result. Substitution is iterated one variable at a time, caching the
/// powers of each inner component incrementally.
pub fn substitute(
    f: &SparsePoly,
    inner: &[SparsePoly],
    inner_vars: usize,
    budget: usize,
) -> Result<SparsePoly> {
    let m = f.nvars();
    assert_eq!(inner.len(), m, "one inner component per outer variable");
    let p = f.modulus();
    let total = m + inner_vars;

    // working space: outer variables in slots 0..m, inner inputs after
    let mut current: Vec<Term> = f
        .embed(total, 0)
        .expect("embedding widens")
        .terms()
        .to_vec();

    for j in 0..m {
        let max_e = current
            .iter()
            .map(|t| t.mono.exponents()[j])
            .max()
            .unwrap_or(0);
        if max_e == 0 {
            continue;
        }
        // bucket terms by the exponent of variable j, clearing that slot
        let mut buckets: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
        for t in &current {
            let e = t.mono.exponents()[j];
            let mut cleared = t.mono.exponents().to_vec();
            cleared[j] = 0;
            buckets.entry(e).or_default().push(Term {
                coeff: t.coeff,
                mono: Monomial(cleared),
            });
        }
        let g = inner[j].embed(total, m).expect("embedding widens");
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        let mut power: Vec<Term> = vec![Term {
            coeff: 1 % p,
            mono: Monomial::constant(total),
        }];
        let mut power_exp = 0u32;
        for (&e, bucket) in &buckets {
            while power_exp < e {
                power = mul_raw(&power, g.terms(), p, budget)?
                    .into_iter()
                    .filter(|&(_, c)| c != 0)
                    .map(|(mono, coeff)| Term { coeff, mono })
                    .collect();
                power_exp += 1;
            }
            if e == 0 {
                for t in bucket {
                    let entry = acc.entry(t.mono.clone()).or_insert(0);
                    *entry = (*entry + t.coeff) % p;
                }
            } else {
                for (mono, c) in mul_raw(&power, bucket, p, budget)? {
                    let entry = acc.entry(mono).or_insert(0);
                    *entry = (*entry + c) % p;
                }
            }
            if acc.len() > budget {
                return Err(Error::TermBudgetExceeded {
                    budget,
                    reached: acc.len(),
                });
            }
        }
        current = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
    }

    // all outer slots are exhausted; project down to the inner inputs
    let terms = current.into_iter().map(|t| {
        debug_assert!(t.mono.exponents()[..m].iter().all(|&e| e == 0));
        (Monomial(t.mono.exponents()[m..].to_vec()), t.coeff)
    });
    SparsePoly::from_terms(p, inner_vars, terms)
}

/// All monomials in the first `active` of `nvars` variables with total
/// degree at most `d`, in canonical order.
pub fn monomials_up_to_degree(nvars: usize, active: usize, d: u32) -> Vec<Monomial> {
    assert!(active <= nvars);
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, var: usize, active: usize, left: u32) {
        if var == active {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[var] = e;
            rec(out, exps, var + 1, active, left - e);
        }
        exps[var] = 0;
    }
    rec(&mut out, &mut exps, 0, active, d);
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    const P: u64 = 1801;

    fn poly(s: &str, p: u64, nvars: usize) -> SparsePoly {
        SparsePoly::parse(s, p, nvars).unwrap()
    }

    #[test]
    fn add_zero_is_identity() {
        let f = poly("3*x1^2 + 5*x2", 7, 2);
        assert_eq!(f.add(&SparsePoly::zero(7, 2)).unwrap(), f);
    }

    #[test]
    fn difference_of_squares() {
        let sum = poly("1*x1 + 1*x2", 7, 2);
        let diff = poly("1*x1 + 6*x2", 7, 2);
        assert_eq!(sum.mul(&diff).unwrap(), poly("1*x1^2 + 6*x2^2", 7, 2));
    }

    #[test]
    fn binomial_square() {
        let f = poly("1 + 1*x1", P, 1);
        assert_eq!(f.mul(&f).unwrap(), poly("1 + 2*x1 + 1*x1^2", P, 1));
    }

    #[test]
    fn zero_poly_degree_is_distinguished() {
        assert_eq!(SparsePoly::zero(P, 3).total_degree(), -1);
        assert_eq!(SparsePoly::constant(P, 3, 5).total_degree(), 0);
    }

    #[test]
    fn evaluate_constant() {
        let c = SparsePoly::constant(P, 2, 42);
        let at = FieldVector::new(P, vec![17, 1800]);
        assert_eq!(c.evaluate(&at).unwrap().value(), 42);
    }

    #[test]
    fn evaluate_product() {
        let f = poly("1*x1*x2", 7, 2);
        let at = FieldVector::new(7, vec![3, 5]);
        assert_eq!(f.evaluate(&at).unwrap().value(), 1);
    }

    #[test]
    fn expand_identity_returns_outer() {
        let f = PolyMap::from_polys(vec![poly("2*x1^2 + 1*x2", P, 2)]).unwrap();
        let id = PolyMap::identity(P, 2);
        assert_eq!(expand(&f, &id, DEFAULT_TERM_BUDGET).unwrap(), f);
    }

    #[test]
    fn expand_univariate_composition() {
        // f(t) = t^2 + 1, g(t) = t + 2 over GF(7): f(g) = t^2 + 4t + 5
        let f = PolyMap::from_polys(vec![poly("1 + 1*x1^2", 7, 1)]).unwrap();
        let g = PolyMap::from_polys(vec![poly("2 + 1*x1", 7, 1)]).unwrap();
        let h = expand(&f, &g, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(h.component(0), &poly("5 + 4*x1 + 1*x1^2", 7, 1));
    }

    #[test]
    fn block_swap_symmetric_fixed() {
        let f = poly("1*x1*x3", 7, 4); // x1*y1 with n = 2
        assert_eq!(f.block_swap().unwrap(), f);
    }

    #[test]
    fn block_swap_moves_blocks() {
        // x1^2*y2 -> y1^2*x2, i.e. x3^2*x2 after renaming
        let f = poly("1*x1^2*x4", 7, 4);
        assert_eq!(f.block_swap().unwrap(), poly("1*x2*x3^2", 7, 4));
    }

    #[test]
    fn parse_rejects_out_of_range_variable() {
        assert!(SparsePoly::parse("1*x3", 7, 2).is_err());
    }

    #[test]
    fn budget_exceeded_is_clean() {
        let f = poly("1*x1 + 1*x2 + 1*x3", P, 3);
        let g = f.mul(&f).unwrap();
        let err = g.mul_budgeted(&g, 5).unwrap_err();
        assert!(matches!(err, Error::TermBudgetExceeded { budget: 5, .. }));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(d + k, k) monomials of degree <= d in k variables
        assert_eq!(monomials_up_to_degree(3, 3, 2).len(), 10);
        assert_eq!(monomials_up_to_degree(4, 2, 3).len(), 10);
        assert_eq!(monomials_up_to_degree(3, 0, 5).len(), 1);
    }

    fn random_poly(rng: &mut ChaCha20Rng, p: u64, nvars: usize, d: u32) -> SparsePoly {
        let mut terms: Vec<(Monomial, u64)> = Vec::new();
        for m in monomials_up_to_degree(nvars, nvars, d) {
            if rng.random_bool(0.5) {
                terms.push((m, rng.random_range(1..p)));
            }
        }
        SparsePoly::from_terms(p, nvars, terms).unwrap()
    }

    fn random_map(rng: &mut ChaCha20Rng, p: u64, in_vars: usize, out: usize, d: u32) -> PolyMap {
        loop {
            let polys: Vec<SparsePoly> = (0..out)
                .map(|_| random_poly(rng, p, in_vars, d))
                .collect();
            if polys.iter().any(|f| !f.is_zero()) {
                return PolyMap::new(in_vars, polys).unwrap();
            }
        }
    }

    #[test]
    fn expand_matches_pointwise_composition() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_map(&mut rng, 7, 2, 2, 3);
            let g = random_map(&mut rng, 7, 3, 2, 3);
            let h = expand(&f, &g, DEFAULT_TERM_BUDGET).unwrap();
            let x = FieldVector::new(7, (0..3).map(|_| rng.random_range(0..7)).collect());
            let direct = f.evaluate(&g.evaluate(&x).unwrap()).unwrap();
            assert_eq!(h.evaluate(&x).unwrap(), direct);
        }
    }

    #[test]
    fn expand_is_associative() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..40 {
            let f = random_map(&mut rng, 7, 2, 1, 2);
            let g = random_map(&mut rng, 7, 2, 2, 2);
            let h = random_map(&mut rng, 7, 2, 2, 2);
            let left = expand(&expand(&f, &g, DEFAULT_TERM_BUDGET).unwrap(), &h, DEFAULT_TERM_BUDGET)
                .unwrap();
            let right = expand(&f, &expand(&g, &h, DEFAULT_TERM_BUDGET).unwrap(), DEFAULT_TERM_BUDGET)
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn expand_degree_bound() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for _ in 0..50 {
            let f = random_map(&mut rng, 7, 2, 1, 3);
            let g = random_map(&mut rng, 7, 2, 2, 3);
            if f.total_degree() < 1 || g.total_degree() < 1 {
                continue;
            }
            let h = expand(&f, &g, DEFAULT_TERM_BUDGET).unwrap();
            assert!(h.total_degree() <= f.total_degree() * g.total_degree());
        }
    }

    proptest! {
        #[test]
        fn canonicalization_idempotent(seed in 0u64..100_000) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, P, 3, 3);
            let printed = f.to_text();
            let reparsed = SparsePoly::parse(&printed, P, 3).unwrap();
            prop_assert_eq!(&reparsed, &f);
            prop_assert_eq!(reparsed.to_text(), printed);
        }

        #[test]
        fn json_round_trip(seed in 0u64..100_000) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, P, 3, 3);
            let json = serde_json::to_string(&f).unwrap();
            let back: SparsePoly = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn add_sub_round_trip(seed in 0u64..100_000) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, P, 3, 3);
            let g = random_poly(&mut rng, P, 3, 3);
            prop_assert_eq!(f.add(&g).unwrap().sub(&g).unwrap(), f);
        }
    }
}
