use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use core::fmt;

use num_bigint::BigInt;

use super::EquidistError;
use crate::poly::{identifiers, parse_univariate, IntPoly, PolyError};

type Generator = dyn Fn(u64) -> Result<IntPoly, PolyError> + Send + Sync;

/// A sequence `n ↦ P_n` of integer polynomials whose roots are the orbits.
pub struct PointFamily {
    pub name: String,
    pub description: String,
    generator: Box<Generator>,
}

impl fmt::Debug for PointFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointFamily")
            .field("name", &self.name)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl PointFamily {
    pub fn new<F>(name: impl Into<String>, description: impl Into<String>, generator: F) -> Self
    where
        F: Fn(u64) -> Result<IntPoly, PolyError> + Send + Sync + 'static,
    {
        Self { name: name.into(), description: description.into(), generator: Box::new(generator) }
    }

    /// `P_n`; fails for `n` outside the family's domain or a constant result.
    pub fn generate(&self, n: u64) -> Result<IntPoly, PolyError> {
        let p = (self.generator)(n)?;
        match p.degree() {
            None => Err(PolyError::ZeroPolynomial),
            Some(0) => Err(PolyError::DegreeTooLow { requested: 1, actual: 0 }),
            Some(_) => Ok(p),
        }
    }
}

fn exponent(n: u64) -> Result<usize, PolyError> {
    if n == 0 {
        return Err(PolyError::DegreeTooLow { requested: 1, actual: 0 });
    }
    usize::try_from(n).map_err(|_| PolyError::DegreeTooLow { requested: 1, actual: 0 })
}

/// `P_n = (Tⁿ − 1)(T − 2) + 3 = T^{n+1} − 2Tⁿ − T + 5`, `n ≥ 1`.
pub fn family_autissier() -> PointFamily {
    PointFamily::new("autissier", "(T^n - 1)*(T - 2) + 3", |n| {
        let n = exponent(n)?;
        let mut c = vec![BigInt::from(0); n + 2];
        c[0] += 5;
        c[1] -= 1;
        c[n] -= 2;
        c[n + 1] += 1;
        Ok(IntPoly::new(c))
    })
}

/// `Tⁿ − a` with `|a| ≥ 2`, `n ≥ 1`.
pub fn family_power_shift(a: i64) -> Result<PointFamily, EquidistError> {
    if a.unsigned_abs() < 2 {
        return Err(EquidistError::BadFamily(format!("power shift needs |a| >= 2, got {a}")));
    }
    Ok(PointFamily::new(format!("power-shift({a})"), format!("T^n - ({a})"), move |n| {
        let n = exponent(n)?;
        let mut c = vec![BigInt::from(0); n + 1];
        c[0] = BigInt::from(-a);
        c[n] = BigInt::from(1);
        Ok(IntPoly::new(c))
    }))
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

// Replaces the identifier `n` by its value, leaving longer identifiers alone.
fn substitute(template: &str, n: u64) -> String {
    let mut out = String::with_capacity(template.len() + 8);
    let mut chars = template.char_indices().peekable();
    while let Some((_, ch)) = chars.next() {
        if is_ident_start(ch) {
            let mut ident = String::new();
            ident.push(ch);
            while let Some(&(_, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                ident.push(c);
                chars.next();
            }
            if ident == "n" {
                out.push_str(&n.to_string());
            } else {
                out.push_str(&ident);
            }
        } else {
            out.push(ch);
        }
    }
    out
}

/// A family given as text in one variable plus the parameter `n`, such as
/// `"T^n - 2"` or `"(x^n - 1)*(x - 2) + 3"`.
pub fn family_template(template: &str) -> Result<PointFamily, EquidistError> {
    let vars: vec::Vec<String> = identifiers(template)
        .map_err(PolyError::from)?
        .into_iter()
        .filter(|v| v != "n")
        .collect();
    let var = match vars.as_slice() {
        [] => String::from("T"),
        [v] => v.clone(),
        _ => {
            return Err(EquidistError::BadFamily(format!(
                "template must use one variable besides n, found {}",
                vars.join(", ")
            )))
        }
    };
    parse_univariate(&substitute(template, 1), &var)?;
    let text = template.to_string();
    Ok(PointFamily::new(template, format!("template in {var}"), move |n| {
        parse_univariate(&substitute(&text, n), &var)
    }))
}
