//! Points of the elliptic curve with coordinates in K and the group law.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kfield::{KContext, KElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Infinity,
    Affine(KElem, KElem),
}

impl Point {
    pub fn infinity() -> Point {
        Point::Infinity
    }

    pub fn affine(x: KElem, y: KElem) -> Point {
        Point::Affine(x, y)
    }

    /// The generic point (theta, eta); it satisfies the curve equation by
    /// definition of K and generates an infinite cyclic subgroup.
    pub fn generic(ctx: &KContext) -> Point {
        Point::Affine(KElem::theta(ctx), KElem::eta(ctx))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Result<&KElem> {
        match self {
            Point::Infinity => Err(Error::PointAtInfinity),
            Point::Affine(x, _) => Ok(x),
        }
    }

    pub fn y(&self) -> Result<&KElem> {
        match self {
            Point::Infinity => Err(Error::PointAtInfinity),
            Point::Affine(_, y) => Ok(y),
        }
    }

    pub fn on_curve(&self, ctx: &KContext) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let a = ctx.a();
                let a1 = KElem::from_fq(a[0], ctx);
                let a2 = KElem::from_fq(a[1], ctx);
                let a3 = KElem::from_fq(a[2], ctx);
                let a4 = KElem::from_fq(a[3], ctx);
                let a6 = KElem::from_fq(a[4], ctx);
                let lhs = y
                    .mul(y, ctx)
                    .add(&a1.mul(x, ctx).mul(y, ctx), ctx)
                    .add(&a3.mul(y, ctx), ctx);
                let rhs = x
                    .pow(3, ctx)
                    .unwrap()
                    .add(&a2.mul(&x.mul(x, ctx), ctx), ctx)
                    .add(&a4.mul(x, ctx), ctx)
                    .add(&a6, ctx);
                lhs == rhs
            }
        }
    }

    pub fn negate(&self, ctx: &KContext) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                // -(x, y) = (x, -y - a1 x - a3).
                let a1 = KElem::from_fq(ctx.a1(), ctx);
                let a3 = KElem::from_fq(ctx.a3(), ctx);
                let ny = y.neg(ctx).sub(&a1.mul(x, ctx), ctx).sub(&a3, ctx);
                Point::Affine(x.clone(), ny)
            }
        }
    }

    /// True for affine points fixed by negation (where 2y + a1 x + a3 = 0).
    pub fn is_two_torsion_affine(&self, ctx: &KContext) -> bool {
        match self {
            Point::Infinity => false,
            Point::Affine(x, y) => {
                let a1 = KElem::from_fq(ctx.a1(), ctx);
                let a3 = KElem::from_fq(ctx.a3(), ctx);
                KElem::from_int(2, ctx)
                    .mul(y, ctx)
                    .add(&a1.mul(x, ctx), ctx)
                    .add(&a3, ctx)
                    .is_zero()
            }
        }
    }

    pub fn add(&self, other: &Point, ctx: &KContext) -> Result<Point> {
        match (self, other) {
            (Point::Infinity, _) => Ok(other.clone()),
            (_, Point::Infinity) => Ok(self.clone()),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                match chord_tangent_slope(self, other, ctx)? {
                    None => Ok(Point::Infinity),
                    Some(m) => {
                        let a1 = KElem::from_fq(ctx.a1(), ctx);
                        let a2 = KElem::from_fq(ctx.a2(), ctx);
                        let a3 = KElem::from_fq(ctx.a3(), ctx);
                        let x3 = m
                            .mul(&m, ctx)
                            .add(&a1.mul(&m, ctx), ctx)
                            .sub(&a2, ctx)
                            .sub(x1, ctx)
                            .sub(x2, ctx);
                        let y3 = m
                            .mul(&x1.sub(&x3, ctx), ctx)
                            .sub(y1, ctx)
                            .sub(&a1.mul(&x3, ctx), ctx)
                            .sub(&a3, ctx);
                        let _ = y2;
                        Ok(Point::Affine(x3, y3))
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &Point, ctx: &KContext) -> Result<Point> {
        self.add(&other.negate(ctx), ctx)
    }

    /// Scalar multiple [k]P (k may be negative).
    pub fn mul_scalar(&self, k: i64, ctx: &KContext) -> Result<Point> {
        if k < 0 {
            return self.negate(ctx).mul_scalar(-k, ctx);
        }
        let mut acc = Point::Infinity;
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base, ctx)?;
            }
            base = base.add(&base, ctx)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Applies the k-fold q-power Frobenius to both coordinates.
    pub fn frobenius(&self, k: usize, ctx: &KContext) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.frobenius(k, ctx), y.frobenius(k, ctx)),
        }
    }
}

/// Slope of the line used by the group law through P and Q (tangent when
/// P = Q); None encodes a vertical line. Both points must be affine.
pub fn chord_tangent_slope(p: &Point, q: &Point, ctx: &KContext) -> Result<Option<KElem>> {
    let (x1, y1) = match p {
        Point::Affine(x, y) => (x, y),
        Point::Infinity => return Err(Error::PointAtInfinity),
    };
    let (x2, y2) = match q {
        Point::Affine(x, y) => (x, y),
        Point::Infinity => return Err(Error::PointAtInfinity),
    };
    if p == q {
        // Tangent: (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3).
        let a1 = KElem::from_fq(ctx.a1(), ctx);
        let a2 = KElem::from_fq(ctx.a2(), ctx);
        let a4 = KElem::from_fq(ctx.a4(), ctx);
        let den = two_y_term(p, ctx)?;
        if den.is_zero() {
            return Ok(None);
        }
        let num = KElem::from_int(3, ctx)
            .mul(&x1.mul(x1, ctx), ctx)
            .add(&KElem::from_int(2, ctx).mul(&a2.mul(x1, ctx), ctx), ctx)
            .add(&a4, ctx)
            .sub(&a1.mul(y1, ctx), ctx);
        Ok(Some(num.div(&den, ctx)?))
    } else if x1 == x2 {
        Ok(None)
    } else {
        Ok(Some(y2.sub(y1, ctx).div(&x2.sub(x1, ctx), ctx)?))
    }
}

/// 2y + a1 x + a3 at an affine point; vanishes exactly at 2-torsion.
pub fn two_y_term(p: &Point, ctx: &KContext) -> Result<KElem> {
    let (x, y) = match p {
        Point::Affine(x, y) => (x, y),
        Point::Infinity => return Err(Error::PointAtInfinity),
    };
    let a1 = KElem::from_fq(ctx.a1(), ctx);
    let a3 = KElem::from_fq(ctx.a3(), ctx);
    Ok(KElem::from_int(2, ctx)
        .mul(y, ctx)
        .add(&a1.mul(x, ctx), ctx)
        .add(&a3, ctx))
}

/// All F_q-rational points (including infinity).
pub fn rational_points(ctx: &KContext) -> Vec<Point> {
    let fd = ctx.fd();
    let mut pts = alloc::vec![Point::Infinity];
    for x in fd.iter_elems() {
        for y in fd.iter_elems() {
            let p = Point::Affine(KElem::from_fq(x, ctx), KElem::from_fq(y, ctx));
            if p.on_curve(ctx) {
                pts.push(p);
            }
        }
    }
    pts
}

/// Order of the group of F_q-rational points; for an elliptic curve this is
/// the class number of the coordinate ring.
pub fn class_number(ctx: &KContext) -> u64 {
    rational_points(ctx).len() as u64
}

/// Validates that an affine point lies on the curve.
pub fn require_on_curve(p: &Point, ctx: &KContext) -> Result<()> {
    if p.on_curve(ctx) {
        Ok(())
    } else {
        Err(Error::PointOffCurve)
    }
}

/// Checks a scalar identity used by tests: the group law is associative on
/// the listed points.
pub fn check_associativity(pts: &[Point], ctx: &KContext) -> Result<()> {
    for p in pts {
        for q in pts {
            for r in pts {
                let lhs = p.add(q, ctx)?.add(r, ctx)?;
                let rhs = p.add(&q.add(r, ctx)?, ctx)?;
                if lhs != rhs {
                    return Err(Error::InternalCheck("associativity".to_string()));
                }
            }
        }
    }
    Ok(())
}
