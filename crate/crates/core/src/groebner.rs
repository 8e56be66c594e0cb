//! Multivariate division, Buchberger's algorithm and reduced Groebner
//! bases over GF(p), zero-dimensional solving, and elimination-based
//! curve implicitization.
//!
//! Scope is desk scale: the pair selection is the normal strategy
//! (smallest lcm degree first) with the coprime-leading-term criterion,
//! guarded by an iteration cap whose failure diagnostic reports the
//! maximum intermediate degree reached.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldVector};
use crate::mpoly::{Monomial, PolyMap, SparsePoly, DEFAULT_TERM_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    #[serde(rename = "lex")]
    Lex,
    #[serde(rename = "grevlex")]
    Grevlex,
}

/// A monomial order: lex or graded-reverse-lex, with an explicit
/// variable priority (`priority[0]` is the greatest variable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Grevlex,
            priority: (0..nvars).collect(),
        }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &v in &priority {
            if v >= n || seen[v] {
                return Err(Error::InvalidInput(
                    "priority must be a permutation of the variables".into(),
                ));
            }
            seen[v] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    /// Total order on monomials; `Greater` means `a` is the larger
    /// (leading) monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.nvars());
        debug_assert_eq!(b.nvars(), self.nvars());
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.priority {
                    match a.exponents()[v].cmp(&b.exponents()[v]) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Equal => {}
                    other => return other,
                }
                // last differing variable, smaller exponent wins
                for &v in self.priority.iter().rev() {
                    match a.exponents()[v].cmp(&b.exponents()[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// A generating set with its order; `reduced` marks a reduced Groebner
/// basis (every generator monic, no term of one generator divisible by
/// the leading term of another).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealBasis {
    pub order: MonomialOrder,
    pub reduced: bool,
    pub generators: Vec<SparsePoly>,
}

/// Diagnostics from one Buchberger run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_processed: usize,
    pub pairs_skipped_coprime: usize,
    /// Largest total degree seen among S-polynomials and their
    /// reductions; an empirical proxy for the regularity of the input.
    pub max_intermediate_degree: i64,
}

#[derive(Debug, Clone, Copy)]
pub struct BuchbergerConfig {
    pub term_budget: usize,
    pub iteration_cap: usize,
}

impl Default for BuchbergerConfig {
    fn default() -> Self {
        BuchbergerConfig {
            term_budget: DEFAULT_TERM_BUDGET,
            iteration_cap: 100_000,
        }
    }
}

/// Internal representation: terms sorted descending under the order, so
/// the leading term is first.
#[derive(Debug, Clone)]
struct GPoly {
    terms: Vec<(Monomial, u64)>,
}

impl GPoly {
    fn from_sparse(poly: &SparsePoly, order: &MonomialOrder) -> Self {
        let mut terms: Vec<(Monomial, u64)> = poly
            .terms()
            .iter()
            .map(|t| (t.mono.clone(), t.coeff))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        GPoly { terms }
    }

    fn to_sparse(&self, p: u64, nvars: usize) -> SparsePoly {
        SparsePoly::from_terms(p, nvars, self.terms.iter().cloned())
            .expect("terms share arity")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(Monomial, u64) {
        &self.terms[0]
    }

    fn total_degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    fn make_monic(&mut self, p: u64) -> Result<()> {
        if self.is_zero() {
            return Ok(());
        }
        let inv = FieldElement::new(self.lead().1, p).inv()?;
        for (_, c) in &mut self.terms {
            *c = (*c as u128 * inv.value() as u128 % p as u128) as u64;
        }
        Ok(())
    }

    /// `self - coeff * factor * other`, by sorted merge: multiplying a
    /// sorted term list by one monomial preserves its order.
    fn sub_scaled(
        &self,
        other: &GPoly,
        coeff: u64,
        factor: &Monomial,
        p: u64,
        order: &MonomialOrder,
    ) -> GPoly {
        let scaled: Vec<(Monomial, u64)> = other
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    m.mul(factor),
                    (*c as u128 * coeff as u128 % p as u128) as u64,
                )
            })
            .collect();
        let mut out = Vec::with_capacity(self.terms.len() + scaled.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < scaled.len() {
            let pick = match (self.terms.get(i), scaled.get(j)) {
                (Some(a), Some(b)) => order.cmp(&a.0, &b.0).reverse(),
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
                    let (m, c) = &scaled[j];
                    if *c != 0 {
                        out.push((m.clone(), p - c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (self.terms[i].1 + p - scaled[j].1 % p) % p;
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GPoly { terms: out }
    }
}

fn reduce_full(
    f: &GPoly,
    basis: &[GPoly],
    p: u64,
    order: &MonomialOrder,
    budget: usize,
) -> Result<GPoly> {
    let mut work = f.clone();
    let mut remainder: Vec<(Monomial, u64)> = Vec::new();
    'outer: while !work.is_zero() {
        if work.terms.len() + remainder.len() > budget {
            return Err(Error::TermBudgetExceeded {
                budget,
                reached: work.terms.len() + remainder.len(),
            });
        }
        let (lm, lc) = work.lead().clone();
        for g in basis {
            if g.is_zero() {
                continue;
            }
            let (gm, gc) = g.lead();
            if gm.divides(&lm) {
                let factor = gm.div_into(&lm);
                let coeff = (lc as u128
                    * FieldElement::new(*gc, p).inv()?.value() as u128
                    % p as u128) as u64;
                work = work.sub_scaled(g, coeff, &factor, p, order);
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        remainder.push((lm, lc));
        work.terms.remove(0);
    }
    Ok(GPoly { terms: remainder })
}

/// Remainder of `f` on division by the basis: no term of the result is
/// divisible by any leading term of the basis, and `f - result` lies in
/// the ideal the basis generates.
pub fn normal_form(f: &SparsePoly, basis: &IdealBasis) -> Result<SparsePoly> {
    if f.nvars() != basis.order.nvars() {
        return Err(Error::ArityMismatch {
            expected: basis.order.nvars(),
            got: f.nvars(),
        });
    }
    let p = f.modulus();
    let gens: Vec<GPoly> = basis
        .generators
        .iter()
        .map(|g| GPoly::from_sparse(g, &basis.order))
        .collect();
    let reduced = reduce_full(
        &GPoly::from_sparse(f, &basis.order),
        &gens,
        p,
        &basis.order,
        DEFAULT_TERM_BUDGET,
    )?;
    Ok(reduced.to_sparse(p, f.nvars()))
}

fn s_poly(f: &GPoly, g: &GPoly, p: u64, order: &MonomialOrder) -> Result<GPoly> {
    let (fm, fc) = f.lead();
    let (gm, gc) = g.lead();
    let l = fm.lcm(gm);
    let f_scaled = {
        let factor = fm.div_into(&l);
        let inv = FieldElement::new(*fc, p).inv()?.value();
        GPoly {
            terms: f
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.mul(&factor),
                        (*c as u128 * inv as u128 % p as u128) as u64,
                    )
                })
                .collect(),
        }
    };
    let factor = gm.div_into(&l);
    let inv = FieldElement::new(*gc, p).inv()?.value();
    Ok(f_scaled.sub_scaled(g, inv, &factor, p, order))
}

/// Buchberger's algorithm with normal pair selection, returning the
/// reduced Groebner basis plus run diagnostics.
pub fn buchberger(
    generators: &[SparsePoly],
    order: MonomialOrder,
    config: BuchbergerConfig,
) -> Result<(IdealBasis, GbStats)> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("need at least one generator".into()));
    }
    let nvars = order.nvars();
    let p = generators[0].modulus();
    for g in generators {
        if g.nvars() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                got: g.nvars(),
            });
        }
        if g.modulus() != p {
            return Err(Error::ModulusMismatch {
                left: p,
                right: g.modulus(),
            });
        }
    }

    let mut basis: Vec<GPoly> = Vec::new();
    for g in generators {
        if g.is_zero() {
            continue;
        }
        let mut gp = GPoly::from_sparse(g, &order);
        gp.make_monic(p)?;
        basis.push(gp);
    }

    let mut stats = GbStats {
        pairs_processed: 0,
        pairs_skipped_coprime: 0,
        max_intermediate_degree: basis.iter().map(|g| g.total_degree()).max().unwrap_or(-1),
    };

    // pair queue keyed by (lcm degree, lcm exponents, i, j): the normal
    // strategy with a deterministic tie-break
    let mut queue: BTreeSet<(u32, Vec<u32>, usize, usize)> = BTreeSet::new();
    let enqueue = |queue: &mut BTreeSet<(u32, Vec<u32>, usize, usize)>,
                   basis: &[GPoly],
                   i: usize,
                   j: usize| {
        let l = basis[i].lead().0.lcm(&basis[j].lead().0);
        queue.insert((l.total_degree(), l.exponents().to_vec(), i, j));
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            enqueue(&mut queue, &basis, i, j);
        }
    }

    while let Some(entry) = queue.pop_first() {
        let (_, _, i, j) = entry;
        if stats.pairs_processed >= config.iteration_cap {
            return Err(Error::IterationCapExceeded {
                pairs_processed: stats.pairs_processed,
                pairs_remaining: queue.len() + 1,
                max_degree: stats.max_intermediate_degree,
            });
        }
        stats.pairs_processed += 1;
        if basis[i].lead().0.is_coprime_with(&basis[j].lead().0) {
            stats.pairs_skipped_coprime += 1;
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], p, &order)?;
        stats.max_intermediate_degree = stats.max_intermediate_degree.max(s.total_degree());
        let mut r = reduce_full(&s, &basis, p, &order, config.term_budget)?;
        if r.is_zero() {
            continue;
        }
        stats.max_intermediate_degree = stats.max_intermediate_degree.max(r.total_degree());
        r.make_monic(p)?;
        basis.push(r);
        let new = basis.len() - 1;
        for k in 0..new {
            enqueue(&mut queue, &basis, k, new);
        }
    }

    // minimalize: drop generators whose leading term another divides
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            if basis[j].lead().0.divides(&basis[i].lead().0) {
                // on equal leading monomials keep the earlier one
                if basis[j].lead().0 == basis[i].lead().0 && j > i {
                    continue;
                }
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<GPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // inter-reduce to the unique reduced basis
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<GPoly> = minimal
                .iter()
                .enumerate()
                .filter_map(|(k, g)| (k != i).then(|| g.clone()))
                .collect();
            let r = reduce_full(&minimal[i], &others, p, &order, config.term_budget)?;
            if r.terms != minimal[i].terms {
                changed = true;
                minimal[i] = r;
            }
        }
        minimal.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }
    for g in &mut minimal {
        g.make_monic(p)?;
    }
    // deterministic output order: ascending leading terms
    minimal.sort_by(|a, b| order.cmp(&a.lead().0, &b.lead().0));

    let generators = minimal.iter().map(|g| g.to_sparse(p, nvars)).collect();
    Ok((
        IdealBasis {
            order,
            reduced: true,
            generators,
        },
        stats,
    ))
}

/// Outcome of reading a point off a reduced lex basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PointSolve {
    /// The basis is exactly `(x_1 - a_1, ..., x_n - a_n)`.
    Point(Vec<u64>),
    /// Anything else; the leading-term shape is reported.
    NotPointShaped { leading_terms: Vec<String> },
}

fn mono_text(mono: &Monomial) -> String {
    if mono.is_constant() {
        return "1".into();
    }
    mono.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Reads the solution point off a basis of the shape
/// `(x_1 - a_1, ..., x_n - a_n)`; intended for reduced lex bases of
/// zero-dimensional ideals.
pub fn solve_zero_dim(basis: &IdealBasis) -> PointSolve {
    let nvars = basis.order.nvars();
    let shape = || PointSolve::NotPointShaped {
        leading_terms: basis
            .generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let lead = g
                    .terms()
                    .iter()
                    .max_by(|a, b| basis.order.cmp(&a.mono, &b.mono))
                    .expect("nonzero generator");
                mono_text(&lead.mono)
            })
            .collect(),
    };
    if basis.generators.len() != nvars {
        return shape();
    }
    let p = match basis.generators.first() {
        Some(g) => g.modulus(),
        None => return shape(),
    };
    let mut point = vec![None; nvars];
    for g in &basis.generators {
        // accepted shapes: x_i (a_i = 0) or x_i + c (a_i = p - c)
        let mut var: Option<usize> = None;
        let mut constant = 0u64;
        let mut ok = true;
        for term in g.terms() {
            if term.mono.is_constant() {
                constant = term.coeff;
            } else if term.mono.total_degree() == 1 && term.coeff == 1 {
                let i = term
                    .mono
                    .exponents()
                    .iter()
                    .position(|&e| e == 1)
                    .expect("degree-one monomial");
                if var.replace(i).is_some() {
                    ok = false;
                }
            } else {
                ok = false;
            }
        }
        let Some(i) = var else { return shape() };
        if !ok || point[i].is_some() {
            return shape();
        }
        point[i] = Some((p - constant) % p);
    }
    match point.into_iter().collect::<Option<Vec<u64>>>() {
        Some(values) => PointSolve::Point(values),
        None => shape(),
    }
}

/// Same, but returns a field vector.
pub fn solve_zero_dim_vector(basis: &IdealBasis, p: u64) -> Option<FieldVector> {
    match solve_zero_dim(basis) {
        PointSolve::Point(values) => Some(FieldVector::new(p, values)),
        PointSolve::NotPointShaped { .. } => None,
    }
}

/// Eliminates the parameter from `x_i = param_i(t)` by a lex basis with
/// t greatest, returning generators of the curve's vanishing ideal.
pub fn implicitize_curve(param: &PolyMap, config: BuchbergerConfig) -> Result<IdealBasis> {
    if param.in_vars() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            got: param.in_vars(),
        });
    }
    if param.total_degree() > 32 {
        return Err(Error::InvalidInput(
            "parametrization degree too large to implicitize".into(),
        ));
    }
    let n = param.out_len();
    let p = param.modulus();
    let total = n + 1; // variable 0 is the parameter
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        // x_i - param_i(t), with t in slot 0 and x_i in slot i + 1
        let lifted = param.component(i).embed(total, 0)?;
        gens.push(SparsePoly::var(p, total, i + 1).sub(&lifted)?);
    }
    let order = MonomialOrder::lex(total);
    let (basis, _) = buchberger(&gens, order, config)?;
    // keep the generators free of the parameter and project them down
    let mut projected = Vec::new();
    for g in &basis.generators {
        if g.terms().iter().any(|t| t.mono.exponents()[0] > 0) {
            continue;
        }
        let terms = g
            .terms()
            .iter()
            .map(|t| (Monomial::new(t.mono.exponents()[1..].to_vec()), t.coeff));
        projected.push(SparsePoly::from_terms(p, n, terms)?);
    }
    Ok(IdealBasis {
        order: MonomialOrder::lex(n),
        reduced: true,
        generators: projected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn poly(s: &str, p: u64, nvars: usize) -> SparsePoly {
        SparsePoly::parse(s, p, nvars).unwrap()
    }

    fn gb(gens: &[SparsePoly], nvars: usize) -> IdealBasis {
        buchberger(gens, MonomialOrder::lex(nvars), BuchbergerConfig::default())
            .unwrap()
            .0
    }

    #[test]
    fn lex_order_basic() {
        let ord = MonomialOrder::lex(2);
        let x1 = Monomial::var(2, 0);
        let x2sq = Monomial::new(vec![0, 2]);
        assert_eq!(ord.cmp(&x1, &x2sq), Ordering::Greater);
    }

    #[test]
    fn grevlex_order_basic() {
        let ord = MonomialOrder::grevlex(3);
        // x1*x3 vs x2^2: equal degree, compare from the last variable:
        // x3 exponent 1 vs 0, so x1*x3 has the larger last entry -> smaller
        let a = Monomial::new(vec![1, 0, 1]);
        let b = Monomial::new(vec![0, 2, 0]);
        assert_eq!(ord.cmp(&a, &b), Ordering::Less);
        let c = Monomial::new(vec![1, 1, 0]);
        assert_eq!(ord.cmp(&c, &b), Ordering::Greater);
    }

    #[test]
    fn normal_form_already_reduced() {
        let basis = gb(&[poly("1*x1^2", 7, 2)], 2);
        let f = poly("3*x2 + 1*x1", 7, 2);
        assert_eq!(normal_form(&f, &basis).unwrap(), f);
    }

    #[test]
    fn normal_form_substitution() {
        // x1^2 x2 mod (x1 - 1) -> x2
        let basis = gb(&[poly("1*x1 + 6", 7, 2)], 2);
        let f = poly("1*x1^2*x2", 7, 2);
        assert_eq!(normal_form(&f, &basis).unwrap(), poly("1*x2", 7, 2));
    }

    #[test]
    fn normal_form_of_combination_is_zero() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let g1 = poly("1*x1 + 1*x2^2", 7, 2);
        let g2 = poly("2 + 1*x1*x2", 7, 2);
        let basis = gb(&[g1.clone(), g2.clone()], 2);
        for _ in 0..20 {
            let c1 = poly(
                &format!("{}*x1 + {}", rng.random_range(0..7), rng.random_range(0..7)),
                7,
                2,
            );
            let c2 = poly(
                &format!("{}*x2 + {}", rng.random_range(0..7), rng.random_range(0..7)),
                7,
                2,
            );
            let combo = c1.mul(&g1).unwrap().add(&c2.mul(&g2).unwrap()).unwrap();
            assert!(normal_form(&combo, &basis).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_form_idempotent() {
        let basis = gb(&[poly("1*x1 + 1*x2", 7, 2), poly("6 + 1*x2^2", 7, 2)], 2);
        let f = poly("1*x1^3 + 2*x1*x2 + 3", 7, 2);
        let once = normal_form(&f, &basis).unwrap();
        assert_eq!(normal_form(&once, &basis).unwrap(), once);
    }

    #[test]
    fn already_reduced_basis_is_fixed() {
        // output is sorted by ascending leading term under the order
        let gens = [poly("5 + 1*x2", 7, 2), poly("6 + 1*x1", 7, 2)];
        let basis = gb(&gens, 2);
        assert_eq!(basis.generators, gens.to_vec());
    }

    #[test]
    fn coprime_pair_is_its_own_basis() {
        let gens = [poly("1*x1 + 1*x2", 7, 2), poly("6 + 1*x2^2", 7, 2)];
        let basis = gb(&gens, 2);
        assert_eq!(basis.generators.len(), 2);
        assert_eq!(
            basis.generators,
            vec![poly("6 + 1*x2^2", 7, 2), poly("1*x1 + 1*x2", 7, 2)]
        );
    }

    #[test]
    fn collapsing_to_a_point() {
        // adding x2 - 1 to (x1 + x2, x2^2 - 1) pins the point (6, 1)
        let gens = [
            poly("1*x1 + 1*x2", 7, 2),
            poly("6 + 1*x2^2", 7, 2),
            poly("6 + 1*x2", 7, 2),
        ];
        let basis = gb(&gens, 2);
        assert_eq!(
            basis.generators,
            vec![poly("6 + 1*x2", 7, 2), poly("1 + 1*x1", 7, 2)]
        );
        assert_eq!(solve_zero_dim(&basis), PointSolve::Point(vec![6, 1]));
    }

    #[test]
    fn principal_ideal_becomes_monic() {
        let basis = gb(&[poly("3*x1^2 + 6*x2", 7, 2)], 2);
        assert_eq!(basis.generators, vec![poly("1*x1^2 + 2*x2", 7, 2)]);
    }

    #[test]
    fn s_polynomials_of_output_reduce_to_zero() {
        let gens = [
            poly("1*x1^2 + 1*x2*x3", 7, 3),
            poly("1*x1*x3 + 2*x2", 7, 3),
            poly("1*x2^2 + 3*x3", 7, 3),
        ];
        let (basis, _) =
            buchberger(&gens, MonomialOrder::lex(3), BuchbergerConfig::default()).unwrap();
        let order = &basis.order;
        let gp: Vec<GPoly> = basis
            .generators
            .iter()
            .map(|g| GPoly::from_sparse(g, order))
            .collect();
        for i in 0..gp.len() {
            for j in i + 1..gp.len() {
                let s = s_poly(&gp[i], &gp[j], 7, order).unwrap();
                let r = reduce_full(&s, &gp, 7, order, DEFAULT_TERM_BUDGET).unwrap();
                assert!(r.is_zero(), "S({i},{j}) did not reduce to zero");
            }
        }
        // every input reduces to zero against the output
        for g in &gens {
            assert!(normal_form(g, &basis).unwrap().is_zero());
        }
    }

    #[test]
    fn reduced_basis_unique_under_shuffle() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..10 {
            let gens: Vec<SparsePoly> = (0..3)
                .map(|_| {
                    let monos = crate::mpoly::monomials_up_to_degree(2, 2, 2);
                    let terms: Vec<(Monomial, u64)> = monos
                        .into_iter()
                        .map(|m| (m, rng.random_range(0..7)))
                        .collect();
                    SparsePoly::from_terms(7, 2, terms).unwrap()
                })
                .filter(|g| !g.is_zero())
                .collect();
            if gens.is_empty() {
                continue;
            }
            let reference = gb(&gens, 2);
            let mut shuffled = gens.clone();
            shuffled.reverse();
            assert_eq!(gb(&shuffled, 2), reference);
        }
    }

    #[test]
    fn solve_rejects_non_point_bases() {
        let basis = gb(&[poly("6 + 1*x1^2", 7, 2), poly("6 + 1*x2", 7, 2)], 2);
        match solve_zero_dim(&basis) {
            PointSolve::NotPointShaped { leading_terms } => {
                assert!(leading_terms.contains(&"x1^2".to_string()));
            }
            other => panic!("expected NotPointShaped, got {other:?}"),
        }
    }

    #[test]
    fn solve_reads_point() {
        let basis = gb(&[poly("2 + 1*x1", 7, 2), poly("1*x2", 7, 2)], 2);
        assert_eq!(solve_zero_dim(&basis), PointSolve::Point(vec![5, 0]));
    }

    #[test]
    fn implicitize_line() {
        // t -> (t, 2t + 1) over GF(7): the line x2 = 2 x1 + 1
        let param = PolyMap::new(
            1,
            vec![poly("1*x1", 7, 1), poly("1 + 2*x1", 7, 1)],
        )
        .unwrap();
        let basis = implicitize_curve(&param, BuchbergerConfig::default()).unwrap();
        assert_eq!(basis.generators.len(), 1);
        for t in 0..7u64 {
            let pt = FieldVector::new(7, vec![t, (2 * t + 1) % 7]);
            assert!(basis.generators[0].evaluate(&pt).unwrap().is_zero());
        }
    }

    #[test]
    fn implicitize_constant_cuts_single_point() {
        let param = PolyMap::new(1, vec![poly("3", 7, 1), poly("5", 7, 1)]).unwrap();
        let basis = implicitize_curve(&param, BuchbergerConfig::default()).unwrap();
        assert_eq!(solve_zero_dim(&basis), PointSolve::Point(vec![3, 5]));
    }

    #[test]
    fn implicitize_example_curve() {
        // t -> (8t^2 + 5t, 6t + 2, 4t + 1) over GF(1801)
        let p = 1801;
        let param = PolyMap::new(
            1,
            vec![
                poly("5*x1 + 8*x1^2", p, 1),
                poly("2 + 6*x1", p, 1),
                poly("1 + 4*x1", p, 1),
            ],
        )
        .unwrap();
        let basis = implicitize_curve(&param, BuchbergerConfig::default()).unwrap();
        assert!(!basis.generators.is_empty());
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..200 {
            let t = rng.random_range(0..p);
            let pt = FieldVector::new(
                p,
                vec![
                    (8 * t * t + 5 * t) % p,
                    (6 * t + 2) % p,
                    (4 * t + 1) % p,
                ],
            );
            for g in &basis.generators {
                assert!(g.evaluate(&pt).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn iteration_cap_reports_diagnostics() {
        let gens = [
            poly("1*x1^2 + 1*x2*x3", 7, 3),
            poly("1*x1*x3 + 2*x2", 7, 3),
            poly("1*x2^2 + 3*x3", 7, 3),
        ];
        let config = BuchbergerConfig {
            iteration_cap: 1,
            ..Default::default()
        };
        match buchberger(&gens, MonomialOrder::lex(3), config) {
            Err(Error::IterationCapExceeded { max_degree, .. }) => assert!(max_degree >= 2),
            other => panic!("expected IterationCapExceeded, got {other:?}"),
        }
    }
}
