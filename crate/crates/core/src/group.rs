//! Linear immersions, trapdoors, synthesis of the hidden-line group law
//! as sparse polynomials, and the group operations themselves.
//!
//! A group is a line `C = rho(A^1)` pushed through an automorphism
//! `theta`; its points are `D = theta(C)` and addition is transported
//! from the parameter line. The private [`Trapdoor`] holds `(rho,
//! theta)`; the public [`CurveGroup`] holds only a generator, the
//! identity, and (optionally) the expanded law polynomials.

use serde::{Deserialize, Serialize};

use crate::autos::{TameAutomorphism, ThetaRepr};
use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldVector};
use crate::mpoly::{expand, PolyMap, SparsePoly};

/// Choice of the affine functional extending `rho^-1` off the line.
/// The off-curve extension is free and changes the polynomial form of
/// the synthesized law (never its values on the curve).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Retraction {
    /// Use the least coordinate with a nonzero direction entry.
    #[serde(rename = "pivot")]
    Pivot,
    /// Use a fixed 0-based coordinate (its direction entry must be
    /// nonzero).
    #[serde(rename = "index")]
    Index(usize),
}

impl std::fmt::Display for Retraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Retraction::Pivot => write!(f, "pivot"),
            Retraction::Index(i) => write!(f, "index:{}", i + 1),
        }
    }
}

impl std::str::FromStr for Retraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "pivot" {
            return Ok(Retraction::Pivot);
        }
        if let Some(ix) = s.strip_prefix("index:") {
            let i: usize = ix
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad retraction index {ix:?}")))?;
            if i == 0 {
                return Err(Error::InvalidInput("retraction index is 1-based".into()));
            }
            return Ok(Retraction::Index(i - 1));
        }
        Err(Error::InvalidInput(format!(
            "unknown retraction {s:?} (expected pivot or index:<i>)"
        )))
    }
}

/// An injective affine map `t -> b + t a` of the line into A^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearImmersion {
    a: FieldVector,
    b: FieldVector,
}

impl LinearImmersion {
    pub fn new(a: FieldVector, b: FieldVector) -> Result<Self> {
        if a.modulus() != b.modulus() {
            return Err(Error::ModulusMismatch {
                left: a.modulus(),
                right: b.modulus(),
            });
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "direction length {} vs offset length {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_zero() {
            return Err(Error::DegenerateInput("immersion direction is zero"));
        }
        Ok(LinearImmersion { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn modulus(&self) -> u64 {
        self.a.modulus()
    }

    pub fn direction(&self) -> &FieldVector {
        &self.a
    }

    pub fn offset(&self) -> &FieldVector {
        &self.b
    }

    pub fn point_at(&self, t: FieldElement) -> FieldVector {
        self.b.add(&self.a.scale(t)).expect("same shape")
    }

    pub fn to_polymap(&self) -> PolyMap {
        let p = self.modulus();
        let polys = (0..self.n())
            .map(|i| {
                SparsePoly::from_affine(
                    &FieldVector::new(p, vec![self.a.get(i).value()]),
                    self.b.get(i),
                )
            })
            .collect();
        PolyMap::new(1, polys).expect("univariate components")
    }

    /// The affine functional `r(x) = (x_i - b_i) / a_i` with
    /// `r(rho(t)) = t`, returned as (coefficient vector, constant).
    pub fn retraction(&self, which: Retraction) -> Result<(FieldVector, FieldElement)> {
        let p = self.modulus();
        let i = match which {
            Retraction::Pivot => self
                .a
                .iter()
                .position(|c| !c.is_zero())
                .expect("direction is nonzero"),
            Retraction::Index(i) => {
                if i >= self.n() {
                    return Err(Error::InvalidInput(format!(
                        "retraction index {} out of range 1..={}",
                        i + 1,
                        self.n()
                    )));
                }
                if self.a.get(i).is_zero() {
                    return Err(Error::DegenerateInput(
                        "retraction coordinate has zero direction entry",
                    ));
                }
                i
            }
        };
        let inv = self.a.get(i).inv()?;
        let mut coeffs = FieldVector::zeros(p, self.n());
        coeffs.set(i, inv);
        let constant = -(self.b.get(i) * inv);
        Ok((coeffs, constant))
    }
}

/// A point of the hidden-line group, identified by its ambient
/// coordinates. Library operations only produce points on the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    coords: FieldVector,
}

impl GroupElement {
    pub fn from_coords(coords: FieldVector) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &FieldVector {
        &self.coords
    }

    pub fn into_coords(self) -> FieldVector {
        self.coords
    }
}

/// The private half of a group: the immersion and the automorphism,
/// with the parameter-recovery polynomial `tmap = r . theta^-1` and the
/// curve parametrization `theta . rho` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Trapdoor {
    immersion: LinearImmersion,
    theta: TameAutomorphism,
    retraction: Retraction,
    /// Single n-variable polynomial recovering the parameter of a curve
    /// point.
    tmap: SparsePoly,
    /// `theta . rho`: the degree-<=d univariate parametrization of D.
    param_map: PolyMap,
}

impl Trapdoor {
    pub fn new(
        immersion: LinearImmersion,
        theta: TameAutomorphism,
        retraction: Retraction,
        budget: usize,
    ) -> Result<Self> {
        if immersion.n() != theta.n() {
            return Err(Error::DimensionMismatch(format!(
                "immersion into {} variables, automorphism of {}",
                immersion.n(),
                theta.n()
            )));
        }
        if immersion.modulus() != theta.modulus() {
            return Err(Error::ModulusMismatch {
                left: theta.modulus(),
                right: immersion.modulus(),
            });
        }
        let (r_coeffs, r_const) = immersion.retraction(retraction)?;
        // tmap = r . theta^-1 is an affine combination of the inverse
        // components, so no expansion is needed
        let n = immersion.n();
        let p = immersion.modulus();
        let mut tmap = SparsePoly::constant(p, n, r_const.value());
        for i in 0..n {
            let c = r_coeffs.get(i);
            if !c.is_zero() {
                tmap = tmap.add(&theta.inverse().component(i).scale(c))?;
            }
        }
        let param_map = expand(theta.forward(), &immersion.to_polymap(), budget)?;
        // tmap(theta(rho(t))) = t must hold identically
        let composed = crate::mpoly::substitute(&tmap, param_map.components(), 1, budget)?;
        if composed != SparsePoly::var(p, 1, 0) {
            return Err(Error::InvalidInput(
                "parameter recovery failed its symbolic self-check".into(),
            ));
        }
        Ok(Trapdoor {
            immersion,
            theta,
            retraction,
            tmap,
            param_map,
        })
    }

    pub fn n(&self) -> usize {
        self.immersion.n()
    }

    pub fn modulus(&self) -> u64 {
        self.immersion.modulus()
    }

    pub fn degree_bound(&self) -> u32 {
        self.theta.degree_bound()
    }

    pub fn immersion(&self) -> &LinearImmersion {
        &self.immersion
    }

    pub fn theta(&self) -> &TameAutomorphism {
        &self.theta
    }

    pub fn retraction_choice(&self) -> Retraction {
        self.retraction
    }

    pub fn tmap(&self) -> &SparsePoly {
        &self.tmap
    }

    /// The univariate parametrization `t -> theta(rho(t))` of D.
    pub fn param_map(&self) -> &PolyMap {
        &self.param_map
    }

    fn check_point(&self, x: &FieldVector) -> Result<()> {
        if x.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus(),
                right: x.modulus(),
            });
        }
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, group lives in {}",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `theta(rho(t))`; t = 0 gives the identity, any other t a generator.
    pub fn element_from_param(&self, t: FieldElement) -> Result<GroupElement> {
        let point = FieldVector::new(self.modulus(), vec![t.value()]);
        Ok(GroupElement::from_coords(self.param_map.evaluate(&point)?))
    }

    pub fn identity(&self) -> GroupElement {
        self.element_from_param(FieldElement::zero(self.modulus()))
            .expect("parametrization evaluates")
    }

    pub fn generator(&self) -> GroupElement {
        self.element_from_param(FieldElement::one(self.modulus()))
            .expect("parametrization evaluates")
    }

    /// Recovers the line parameter of a point (meaningful on D).
    pub fn tparam(&self, point: &GroupElement) -> Result<FieldElement> {
        self.check_point(point.coords())?;
        self.tmap.evaluate(point.coords())
    }

    /// Decides membership in D: `theta^-1(x)` must lie on the line.
    pub fn member(&self, x: &FieldVector) -> Result<bool> {
        self.check_point(x)?;
        let pre = self.theta.apply_inverse(x)?;
        let t = self.tmap.evaluate(x)?;
        Ok(pre == self.immersion.point_at(t))
    }

    /// Group addition through the trapdoor: parameters add.
    pub fn add(&self, lhs: &GroupElement, rhs: &GroupElement) -> Result<GroupElement> {
        let s = self.tparam(lhs)? + self.tparam(rhs)?;
        self.element_from_param(s)
    }

    pub fn neg(&self, point: &GroupElement) -> Result<GroupElement> {
        let t = self.tparam(point)?;
        self.element_from_param(-t)
    }

    /// Double-and-add over [`Trapdoor::add`]; the exponent is reduced
    /// mod p (the group has order p).
    pub fn scalar_mul(&self, point: &GroupElement, e: u64) -> Result<GroupElement> {
        scalar_mul_generic(|a, b| self.add(a, b), self.identity(), point, e % self.modulus())
    }

    /// Trapdoor discrete logarithm: `e` with `e . base = point`.
    pub fn dlog(&self, point: &GroupElement, base: &GroupElement) -> Result<FieldElement> {
        let tb = self.tparam(base)?;
        if tb.is_zero() {
            return Err(Error::IdentityBase);
        }
        let tq = self.tparam(point)?;
        tq.div(&tb)
    }

    /// The full 2n-variable law `g(x, y)` expanded into sparse form:
    /// `theta(rho(tmap(x) + tmap(y)))`.
    pub fn synth_law(&self, budget: usize) -> Result<PolyMap> {
        let n = self.n();
        let s = self.tmap.embed(2 * n, 0)?.add(&self.tmap.embed(2 * n, n)?)?;
        let s_map = PolyMap::new(2 * n, vec![s])?;
        expand(&self.param_map, &s_map, budget)
    }

    /// The n-variable negation map `theta(rho(-tmap(x)))`.
    pub fn synth_negation(&self, budget: usize) -> Result<PolyMap> {
        let neg_map = PolyMap::new(self.n(), vec![self.tmap.neg()])?;
        expand(&self.param_map, &neg_map, budget)
    }

    /// A new trapdoor for the unique group structure on D carrying `p0`
    /// to the identity and `p1` to one: `rho'(t) = rho(s0 + (s1 - s0) t)`.
    pub fn reparametrize(&self, p0: &GroupElement, p1: &GroupElement) -> Result<Trapdoor> {
        if p0 == p1 {
            return Err(Error::DegenerateInput("anchor points coincide"));
        }
        let s0 = self.tparam(p0)?;
        let s1 = self.tparam(p1)?;
        let scale = s1 - s0;
        if scale.is_zero() {
            return Err(Error::DegenerateInput("anchor points have equal parameters"));
        }
        let immersion = LinearImmersion::new(
            self.immersion.direction().scale(scale),
            self.immersion
                .offset()
                .add(&self.immersion.direction().scale(s0))?,
        )?;
        Trapdoor::new(
            immersion,
            self.theta.clone(),
            self.retraction,
            crate::mpoly::DEFAULT_TERM_BUDGET,
        )
    }

    /// The public description: generator, identity, optional law and
    /// negation polynomials. The immersion and automorphism never leave
    /// the trapdoor.
    pub fn to_public(&self, law: Option<PolyMap>, negation: Option<PolyMap>) -> CurveGroup {
        CurveGroup {
            p: self.modulus(),
            n: self.n(),
            generator: self.generator().into_coords(),
            identity: self.identity().into_coords(),
            law,
            negation,
        }
    }
}

/// The public half of a group: what can be shared without revealing the
/// trapdoor.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGroup {
    p: u64,
    n: usize,
    generator: FieldVector,
    identity: FieldVector,
    law: Option<PolyMap>,
    negation: Option<PolyMap>,
}

impl CurveGroup {
    pub fn new(
        p: u64,
        n: usize,
        generator: FieldVector,
        identity: FieldVector,
        law: Option<PolyMap>,
        negation: Option<PolyMap>,
    ) -> Result<Self> {
        for v in [&generator, &identity] {
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "point has {} coordinates, group lives in {}",
                    v.len(),
                    n
                )));
            }
            if v.modulus() != p {
                return Err(Error::ModulusMismatch {
                    left: p,
                    right: v.modulus(),
                });
            }
        }
        if generator == identity {
            return Err(Error::DegenerateInput("generator equals identity"));
        }
        if let Some(law) = &law {
            if law.in_vars() != 2 * n || law.out_len() != n {
                return Err(Error::ArityMismatch {
                    expected: 2 * n,
                    got: law.in_vars(),
                });
            }
        }
        if let Some(neg) = &negation {
            if neg.in_vars() != n || neg.out_len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: neg.in_vars(),
                });
            }
        }
        Ok(CurveGroup {
            p,
            n,
            generator,
            identity,
            law,
            negation,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> GroupElement {
        GroupElement::from_coords(self.generator.clone())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_coords(self.identity.clone())
    }

    pub fn law(&self) -> Option<&PolyMap> {
        self.law.as_ref()
    }

    pub fn negation(&self) -> Option<&PolyMap> {
        self.negation.as_ref()
    }

    /// Addition by evaluating the public law polynomials.
    pub fn add(&self, lhs: &GroupElement, rhs: &GroupElement) -> Result<GroupElement> {
        let law = self
            .law
            .as_ref()
            .ok_or(Error::ModeUnavailable("group law not synthesized"))?;
        let mut joint = Vec::with_capacity(2 * self.n);
        joint.extend_from_slice(lhs.coords().values());
        joint.extend_from_slice(rhs.coords().values());
        let joint = FieldVector::new(self.p, joint);
        Ok(GroupElement::from_coords(law.evaluate(&joint)?))
    }

    pub fn neg(&self, point: &GroupElement) -> Result<GroupElement> {
        let negation = self
            .negation
            .as_ref()
            .ok_or(Error::ModeUnavailable("negation map not synthesized"))?;
        Ok(GroupElement::from_coords(negation.evaluate(point.coords())?))
    }

    pub fn scalar_mul(&self, point: &GroupElement, e: u64) -> Result<GroupElement> {
        scalar_mul_generic(|a, b| self.add(a, b), self.identity(), point, e % self.p)
    }
}

fn scalar_mul_generic(
    add: impl Fn(&GroupElement, &GroupElement) -> Result<GroupElement>,
    identity: GroupElement,
    point: &GroupElement,
    e: u64,
) -> Result<GroupElement> {
    let mut acc = identity;
    let mut base = point.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = add(&acc, &base)?;
        }
        e >>= 1;
        if e > 0 {
            base = add(&base, &base)?;
        }
    }
    Ok(acc)
}

/// On-disk form of a private trapdoor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrapdoorFile {
    pub p: u64,
    pub n: usize,
    pub d: u32,
    pub immersion: ImmersionRepr,
    pub theta: ThetaRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImmersionRepr {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl TrapdoorFile {
    pub fn from_trapdoor(trap: &Trapdoor) -> Self {
        TrapdoorFile {
            p: trap.modulus(),
            n: trap.n(),
            d: trap.degree_bound(),
            immersion: ImmersionRepr {
                a: trap.immersion().direction().values().to_vec(),
                b: trap.immersion().offset().values().to_vec(),
            },
            theta: ThetaRepr::from_tame(trap.theta()),
        }
    }

    pub fn into_trapdoor(self, retraction: Retraction, budget: usize) -> Result<Trapdoor> {
        crate::ffield::PrimeField::new(self.p)?;
        let immersion = LinearImmersion::new(
            FieldVector::new(self.p, self.immersion.a),
            FieldVector::new(self.p, self.immersion.b),
        )?;
        if immersion.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "immersion length {} vs declared n = {}",
                immersion.n(),
                self.n
            )));
        }
        let theta = self.theta.into_tame(self.p, self.d, budget)?;
        Trapdoor::new(immersion, theta, retraction, budget)
    }
}

/// On-disk form of a public group description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub p: u64,
    pub n: usize,
    pub generator: Vec<u64>,
    pub identity: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<Vec<SparsePoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negation: Option<Vec<SparsePoly>>,
}

impl GroupFile {
    pub fn from_group(group: &CurveGroup) -> Self {
        GroupFile {
            p: group.modulus(),
            n: group.n(),
            generator: group.generator.values().to_vec(),
            identity: group.identity.values().to_vec(),
            law: group.law.as_ref().map(|m| m.components().to_vec()),
            negation: group.negation.as_ref().map(|m| m.components().to_vec()),
        }
    }

    pub fn into_group(self) -> Result<CurveGroup> {
        crate::ffield::PrimeField::new(self.p)?;
        let law = self.law.map(PolyMap::from_polys).transpose()?;
        let negation = self.negation.map(PolyMap::from_polys).transpose()?;
        CurveGroup::new(
            self.p,
            self.n,
            FieldVector::new(self.p, self.generator),
            FieldVector::new(self.p, self.identity),
            law,
            negation,
        )
    }
}
