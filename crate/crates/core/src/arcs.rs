//! Maximal arcs in PG(2,2^v) and the extremal nonincident configurations
//! they induce.
//!
//! A maximal (s,β)-arc is a point set met by every line in 0 or β points;
//! necessarily s = 1 + (q+1)(β-1), and the number of secant lines is
//! s(q+1)/β. The construction here follows Denniston: fix an irreducible
//! quadratic form Q(x,y) = x² + bxy + y² over GF(2^v) and an additive
//! subgroup H of order 2^u, and take the affine points where Q lands in H.
//! When u = v/2 the arc has exactly as many external lines as points, which
//! yields a nonincident set of s points and s lines with
//! s = 1 + (q+1)(√q - 1).
//!
//! Every constructed arc is re-verified by a full line scan before it is
//! returned: the construction has several conventional choices (form
//! coefficient, subgroup, embedding) that are easy to get subtly wrong.

use thiserror::Error;

use crate::bounds::{external_line_bound, Rational};
use crate::gf::{FieldElement, FieldError, FieldTable};
use crate::plane::{Plane, PlaneError, PlaneId, PointSet};
use crate::search::{verify_certificate, ArcTag, NonincidenceCertificate, Provenance, SearchError};

/// Default ceiling on the plane order a Denniston construction will build.
pub const DEFAULT_ORDER_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("invalid arc parameters: {0}")]
    BadParameters(String),
    #[error("arc construction self-check failed: {0} (this is a bug)")]
    ConstructionCheckFailed(String),
    #[error(
        "maximal arcs are constructed only in PG(2,2^v): no nontrivial maximal arc \
         exists in a desarguesian plane of odd order (Ball-Blokhuis-Mazzocca), and \
         q = {q} is not a power of two"
    )]
    OddOrderUnsupported { q: u64 },
    #[error(
        "arc is not extremal: beta = {beta} differs from sqrt(q), so its {size} \
         points leave {external} external lines"
    )]
    NotExtremal { beta: u32, size: u32, external: u32 },
    #[error("the point set is not a maximal arc: line intersection sizes vary")]
    NotAnArc,
    #[error("arc belongs to a different plane")]
    PlaneMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// How an arc came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcConstruction {
    Denniston {
        v: u32,
        u: u32,
        /// Element index of the quadratic-form coefficient.
        b: u32,
        /// Element indices spanning the additive subgroup H.
        basis: Vec<u32>,
    },
    External,
}

/// A verified maximal (s,β)-arc in a projective plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalArc {
    plane: PlaneId,
    points: PointSet,
    beta: u32,
    construction: ArcConstruction,
}

impl MaximalArc {
    /// Wrap an externally supplied point set after verifying the arc
    /// property by a full line scan.
    pub fn from_verified(plane: &Plane, points: PointSet) -> Result<MaximalArc, ArcError> {
        let check = verify_maximal_arc(plane, &points)?;
        match check.beta {
            Some(beta) if check.is_arc => Ok(MaximalArc {
                plane: plane.id(),
                points,
                beta,
                construction: ArcConstruction::External,
            }),
            _ => Err(ArcError::NotAnArc),
        }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    /// |Y| = 1 + (q+1)(β-1).
    pub fn size(&self) -> u32 {
        self.points.len()
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn construction(&self) -> &ArcConstruction {
        &self.construction
    }

    pub fn plane_id(&self) -> PlaneId {
        self.plane
    }
}

/// Result of scanning every line against a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcCheck {
    /// True iff all nonzero line intersection sizes agree.
    pub is_arc: bool,
    /// The common nonzero intersection size, when `is_arc`.
    pub beta: Option<u32>,
    pub external: u32,
    pub secant: u32,
}

/// Scan all lines and decide whether `y` is a maximal arc. When it is, the
/// external-line count equals (q³+q²+q-qs)/(q+s) exactly, which is asserted.
pub fn verify_maximal_arc(plane: &Plane, y: &PointSet) -> Result<ArcCheck, PlaneError> {
    assert!(!y.is_empty(), "arc verification requires a nonempty set");
    let counts = plane.line_meet_counts(y)?;
    let external = counts.iter().filter(|&&c| c == 0).count() as u32;
    let secant = plane.size() - external;
    let mut nonzero = counts.iter().filter(|&&c| c > 0);
    let first = nonzero.next().copied();
    let is_arc = match first {
        Some(beta) => nonzero.all(|&c| c == beta),
        None => false,
    };
    if is_arc {
        let bound = external_line_bound(plane.q() as u64, y.len() as u64);
        assert_eq!(
            Rational::from(num::BigInt::from(external)),
            bound,
            "a maximal arc attains the external-line bound exactly"
        );
    }
    Ok(ArcCheck {
        is_arc,
        beta: if is_arc { first } else { None },
        external,
        secant,
    })
}

/// Build the Denniston maximal (s, 2^u)-arc in PG(2, 2^v), 0 < u < v,
/// together with the plane it lives in.
///
/// Deterministic choices: the field modulus is the default for GF(2^v),
/// b is the least element index making x² + bx + 1 irreducible, and H is
/// the span of the first u polynomial-basis vectors (element indices
/// below 2^u). The returned arc has been verified by a full line scan.
pub fn denniston_arc(v: u32, u: u32) -> Result<(Plane, MaximalArc), ArcError> {
    denniston_arc_capped(v, u, DEFAULT_ORDER_CAP)
}

/// As [`denniston_arc`], with an explicit ceiling on the plane order.
pub fn denniston_arc_capped(
    v: u32,
    u: u32,
    max_order: u32,
) -> Result<(Plane, MaximalArc), ArcError> {
    if u == 0 || u >= v {
        return Err(ArcError::BadParameters(format!(
            "need 0 < u < v, got u = {u}, v = {v}"
        )));
    }
    if v >= 32 || (1u64 << v) > max_order as u64 {
        return Err(ArcError::BadParameters(format!(
            "order 2^{v} exceeds the cap {max_order}"
        )));
    }

    let field = FieldTable::build(2, v, None)?;
    let q = field.order();
    let plane = Plane::build_pg2(&field);

    let b = field
        .elements()
        .skip(1)
        .find(|&b| field.quadratic_irreducible(b) == Ok(true))
        .expect("every binary field admits an irreducible x^2 + bx + 1");

    // H = span of 1, x, ..., x^(u-1): exactly the element indices below 2^u.
    let h_order = 1u32 << u;
    let mut members = Vec::new();
    for x in 0..q {
        for y in 0..q {
            let (xe, ye) = (FieldElement(x), FieldElement(y));
            let form = field.add(
                field.add(field.mul(xe, xe), field.mul(field.mul(b, xe), ye)),
                field.mul(ye, ye),
            );
            if form.index() < h_order {
                let point = plane
                    .point_index([1, x, y])
                    .expect("affine points exist in a constructed plane");
                members.push(point);
            }
        }
    }
    let points = PointSet::new(&plane, members)?;

    let beta = h_order;
    let expected_size = 1 + (q + 1) * (beta - 1);
    let check = verify_maximal_arc(&plane, &points)?;
    if !check.is_arc || check.beta != Some(beta) {
        return Err(ArcError::ConstructionCheckFailed(format!(
            "line scan found intersection sizes other than 0 and {beta}"
        )));
    }
    if points.len() != expected_size {
        return Err(ArcError::ConstructionCheckFailed(format!(
            "got {} points, expected {expected_size}",
            points.len()
        )));
    }
    let expected_secant = expected_size * (q + 1) / beta;
    if check.secant != expected_secant || check.external != plane.size() - expected_secant {
        return Err(ArcError::ConstructionCheckFailed(format!(
            "line-type counts ({}, {}) disagree with s(q+1)/beta = {expected_secant}",
            check.external, check.secant
        )));
    }

    let arc = MaximalArc {
        plane: plane.id(),
        points,
        beta,
        construction: ArcConstruction::Denniston {
            v,
            u,
            b: b.index(),
            basis: (0..u).map(|i| 1u32 << i).collect(),
        },
    };
    Ok((plane, arc))
}

/// Convenience entry by plane order and arc degree. Orders that are not
/// powers of two are refused outright: no nontrivial maximal arc exists in
/// a desarguesian plane of odd order.
pub fn denniston_arc_for_order(q: u64, beta: u64) -> Result<(Plane, MaximalArc), ArcError> {
    if q < 2 || !q.is_power_of_two() {
        return Err(ArcError::OddOrderUnsupported { q });
    }
    if beta < 2 || !beta.is_power_of_two() || beta >= q {
        return Err(ArcError::BadParameters(format!(
            "arc degree {beta} must be a power of two with 1 < beta < q = {q}"
        )));
    }
    denniston_arc_capped(q.trailing_zeros(), beta.trailing_zeros(), q as u32)
}

/// Turn an extremal arc (β = √q) into a nonincident certificate: Y is the
/// arc and M the lines disjoint from it, of which there are exactly |Y|.
pub fn nonincident_from_arc(
    plane: &Plane,
    arc: &MaximalArc,
) -> Result<NonincidenceCertificate, ArcError> {
    if arc.plane != plane.id() {
        return Err(ArcError::PlaneMismatch);
    }
    let q = plane.q();
    let root = (q as u64).isqrt() as u32;
    let lines = plane.external_lines(&arc.points)?;
    if root * root != q || arc.beta != root {
        return Err(ArcError::NotExtremal {
            beta: arc.beta,
            size: arc.size(),
            external: lines.len(),
        });
    }
    if lines.len() != arc.size() {
        return Err(ArcError::ConstructionCheckFailed(format!(
            "extremal arc has {} external lines for {} points",
            lines.len(),
            arc.size()
        )));
    }

    let mut cert = NonincidenceCertificate::new(
        plane,
        arc.points.clone(),
        lines,
        Provenance::ArcConstruction,
    )?;
    if let ArcConstruction::Denniston { v, u, b, basis } = &arc.construction {
        cert = cert.with_arc_tag(ArcTag {
            v: *v,
            u: *u,
            b: *b,
            basis: basis.clone(),
        });
    }
    match verify_certificate(plane, &cert) {
        Ok(true) => Ok(cert),
        other => Err(ArcError::ConstructionCheckFailed(format!(
            "certificate failed final verification: {other:?}"
        ))),
    }
}
