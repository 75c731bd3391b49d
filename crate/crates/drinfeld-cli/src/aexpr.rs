//! Parser for coefficient-ring expressions passed via `--b`.
//!
//! Grammar: a sum of terms, each term a product of
//!   - an optional coefficient: an integer (reduced into the prime subfield)
//!     or a bracketed digit list like `[0,1]` naming an extension-field
//!     element in the polynomial basis,
//!   - an optional power of `T` (the degree-2 generator),
//!   - an optional single factor of `Y` (the degree-3 generator).
//!
//! `+` and `-` separate terms and a leading sign is allowed. Powers of `Y`
//! beyond the first are rejected: rewrite them with the curve relation
//! Y^2 + a1*T*Y + a3*Y = T^3 + a2*T^2 + a4*T + a6 first.

use drinfeld_core::zeta::AElem;
use drinfeld_core::{FqPoly, KContext, KElem};
use std::fmt;

/// Largest accepted `T` exponent; keeps hostile inputs from allocating
/// enormous polynomials.
const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AExprError {
    /// 1-based byte position of the offending character.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for AExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.msg)
    }
}

struct Scanner<'s> {
    bytes: &'s [u8],
    pos: usize,
}

impl<'s> Scanner<'s> {
    fn new(s: &'s str) -> Scanner<'s> {
        Scanner { bytes: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, AExprError> {
        Err(AExprError { pos: pos + 1, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, AExprError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or(())
                .or_else(|_| self.err(start, "integer literal is too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return self.err(start, "expected a number");
        }
        Ok(value)
    }
}

/// Parses an expression into an exact element of the coefficient ring.
pub fn parse_a_expr(ctx: &KContext, input: &str) -> Result<AElem, AExprError> {
    let fd = ctx.fd();
    let mut sc = Scanner::new(input);
    let mut total = KElem::zero(ctx);

    sc.skip_ws();
    if sc.peek().is_none() {
        return sc.err(sc.pos, "empty expression");
    }

    let mut first = true;
    loop {
        sc.skip_ws();
        // Sign between terms (or leading sign on the first term).
        let mut negate = false;
        match sc.peek() {
            Some(b'+') => {
                sc.pos += 1;
            }
            Some(b'-') => {
                negate = true;
                sc.pos += 1;
            }
            None if !first => break,
            _ if first => {}
            Some(c) => {
                return sc.err(sc.pos, format!("expected '+' or '-', found '{}'", c as char))
            }
            None => break,
        }
        sc.skip_ws();

        // One term: factors joined by '*'.
        let mut coeff = fd.one();
        let mut t_exp: u32 = 0;
        let mut has_y = false;
        loop {
            let fpos = sc.pos;
            match sc.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = sc.number()?;
                    coeff = fd.mul(coeff, fd.from_int((v % u64::from(fd.p())) as i64));
                }
                Some(b'[') => {
                    sc.pos += 1;
                    let mut digits = Vec::new();
                    loop {
                        sc.skip_ws();
                        let dpos = sc.pos;
                        let d = sc.number()?;
                        let d = match u32::try_from(d) {
                            Ok(d) => d,
                            Err(_) => return sc.err(dpos, "digit is too large"),
                        };
                        digits.push(d);
                        sc.skip_ws();
                        if sc.eat(b',') {
                            continue;
                        }
                        if sc.eat(b']') {
                            break;
                        }
                        return sc.err(sc.pos, "expected ',' or ']' in digit list");
                    }
                    let c = match fd.from_digits(&digits) {
                        Ok(c) => c,
                        Err(_) => {
                            return sc.err(
                                fpos,
                                "digit list does not name a field element (too many digits or a digit >= p)",
                            )
                        }
                    };
                    coeff = fd.mul(coeff, c);
                }
                Some(b'T') | Some(b't') => {
                    sc.pos += 1;
                    let mut e: u32 = 1;
                    if sc.eat(b'^') {
                        let epos = sc.pos;
                        let v = sc.number()?;
                        e = match u32::try_from(v).ok().filter(|&v| v <= MAX_EXPONENT) {
                            Some(e) => e,
                            None => return sc.err(epos, "exponent is too large"),
                        };
                    }
                    t_exp = match t_exp.checked_add(e).filter(|&v| v <= MAX_EXPONENT) {
                        Some(v) => v,
                        None => return sc.err(fpos, "exponent is too large"),
                    };
                }
                Some(b'Y') | Some(b'y') => {
                    sc.pos += 1;
                    let mut e: u32 = 1;
                    if sc.eat(b'^') {
                        let epos = sc.pos;
                        let v = sc.number()?;
                        e = match u32::try_from(v).ok().filter(|&v| v <= MAX_EXPONENT) {
                            Some(e) => e,
                            None => return sc.err(epos, "exponent is too large"),
                        };
                    }
                    if u32::from(has_y) + e > 1 {
                        return sc.err(
                            fpos,
                            "powers of Y beyond the first cannot appear: reduce them with the \
                             curve relation Y^2 + a1*T*Y + a3*Y = T^3 + a2*T^2 + a4*T + a6",
                        );
                    }
                    has_y = has_y || e == 1;
                }
                Some(c) => {
                    return sc.err(
                        sc.pos,
                        format!("expected a coefficient, 'T', or 'Y', found '{}'", c as char),
                    )
                }
                None => return sc.err(sc.pos, "expected a coefficient, 'T', or 'Y'"),
            }
            sc.skip_ws();
            if !sc.eat(b'*') {
                break;
            }
            sc.skip_ws();
        }

        // Assemble coeff * T^t_exp * Y^(0 or 1) as an exact element.
        let mono = {
            let mut p = vec![fd.zero(); t_exp as usize + 1];
            p[t_exp as usize] = coeff;
            FqPoly::from_coeffs(p)
        };
        let (u, v) = if has_y { (FqPoly::zero(), mono) } else { (mono, FqPoly::zero()) };
        let mut term = KElem::new(u, v, FqPoly::one(fd), ctx)
            .expect("monomial with unit denominator is always valid");
        if negate {
            term = term.neg(ctx);
        }
        total = total.add(&term, ctx);

        first = false;
        sc.skip_ws();
        match sc.peek() {
            None => break,
            Some(b'+') | Some(b'-') => continue,
            Some(c) => {
                return sc.err(sc.pos, format!("expected '+' or '-', found '{}'", c as char))
            }
        }
    }

    AElem::new(total, ctx).map_err(|e| AExprError { pos: 1, msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use drinfeld_core::FieldDesc;

    fn ctx_f3() -> KContext {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        let a = [fd.zero(), fd.zero(), fd.zero(), fd.from_int(-1), fd.from_int(-1)];
        KContext::new(&fd, a).unwrap()
    }

    fn ctx_f4() -> KContext {
        let fd = FieldDesc::new(2, 2, None).unwrap();
        let c = fd.from_digits(&[0, 1]).unwrap();
        let a = [fd.zero(), fd.zero(), fd.one(), fd.zero(), c];
        KContext::new(&fd, a).unwrap()
    }

    #[test]
    fn constants_and_monomials() {
        let ctx = ctx_f3();
        assert_eq!(parse_a_expr(&ctx, "1").unwrap().elem(), &KElem::one(&ctx));
        assert_eq!(parse_a_expr(&ctx, "T").unwrap().elem(), &KElem::theta(&ctx));
        assert_eq!(parse_a_expr(&ctx, "Y").unwrap().elem(), &KElem::eta(&ctx));
        let theta = KElem::theta(&ctx);
        let expected = theta
            .mul(&theta, &ctx)
            .add(&KElem::from_int(2, &ctx), &ctx);
        assert_eq!(parse_a_expr(&ctx, "T^2 + 2").unwrap().elem(), &expected);
    }

    #[test]
    fn products_and_signs() {
        let ctx = ctx_f3();
        let theta = KElem::theta(&ctx);
        let eta = KElem::eta(&ctx);
        let expected = theta.mul(&eta, &ctx).add(&KElem::one(&ctx), &ctx);
        assert_eq!(parse_a_expr(&ctx, "T*Y + 1").unwrap().elem(), &expected);
        assert_eq!(parse_a_expr(&ctx, "2*T^1*Y").unwrap().elem(), &eta.mul(&theta, &ctx).mul(&KElem::from_int(2, &ctx), &ctx));
        let neg = parse_a_expr(&ctx, "-T + T").unwrap();
        assert!(neg.elem().is_zero());
        // 2 == -1 in F_3.
        assert_eq!(
            parse_a_expr(&ctx, "-1").unwrap().elem(),
            &KElem::from_int(2, &ctx)
        );
    }

    #[test]
    fn extension_field_digit_lists() {
        let ctx = ctx_f4();
        let c = ctx.fd().from_digits(&[0, 1]).unwrap();
        let expected = KElem::theta(&ctx).mul_fq(c, &ctx);
        assert_eq!(parse_a_expr(&ctx, "[0,1]*T").unwrap().elem(), &expected);
        assert_eq!(parse_a_expr(&ctx, "[0, 1] * T").unwrap().elem(), &expected);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let ctx = ctx_f3();
        let e = parse_a_expr(&ctx, "T^2 +").unwrap_err();
        assert_eq!(e.pos, 6);
        let e = parse_a_expr(&ctx, "T + @").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_a_expr(&ctx, "").unwrap_err();
        assert_eq!(e.pos, 1);
        let e = parse_a_expr(&ctx, "[3]").unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(e.msg.contains("field element"));
    }

    #[test]
    fn y_powers_direct_to_the_curve_relation() {
        let ctx = ctx_f3();
        for bad in ["Y^2", "Y*Y", "T*Y^3"] {
            let e = parse_a_expr(&ctx, bad).unwrap_err();
            assert!(e.msg.contains("curve relation"), "{bad}: {}", e.msg);
        }
        // Y^0 and Y^1 are fine.
        assert!(parse_a_expr(&ctx, "Y^0").unwrap().elem().is_one());
        assert_eq!(parse_a_expr(&ctx, "Y^1").unwrap().elem(), &KElem::eta(&ctx));
    }

    #[test]
    fn round_trips_through_the_serializer() {
        let ctx = ctx_f3();
        let parsed = parse_a_expr(&ctx, "T*Y + 1").unwrap();
        let v = crate::json::kelem_to_json(ctx.fd(), parsed.elem());
        let back = crate::json::kelem_from_json(&ctx, &v).unwrap();
        assert_eq!(&back, parsed.elem());
    }
}
