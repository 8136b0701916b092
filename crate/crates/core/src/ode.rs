//! The ODE family
//!
//! ```text
//! -(d²/dz² + (1-ν₊-ν₋)/z d/dz + ν₊ν₋/z²) ψ + (1/z) Σₙ vₙ zⁿ ψ = 0
//! ```
//!
//! with indicial roots ν₊ ≥ ν₋ at the regular singular point z = 0, a WKB scale `s`
//! and rational potential coefficients v₀..v_N. All parameters are held as exact
//! rationals; finite `f64` inputs convert exactly (every finite double is dyadic).

use std::fmt;
use std::str::FromStr;

use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;
use dashu_ratio::RBig;
use serde_json::Value;

use crate::error::{Error, Result};

/// Whether z = 0 is an ordinary point ((ν₋, ν₊) = (0, 1)) or a regular singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingularPointKind {
    Ordinary,
    RegularSingular,
}

/// Selects the exponent ν of the Frobenius series Σ aₘ z^(m+ν).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    NuPlus,
    NuMinus,
}

impl Branch {
    pub fn exponent<'a>(&self, spec: &'a OdeSpec) -> &'a RBig {
        match self {
            Branch::NuPlus => &spec.nu_plus,
            Branch::NuMinus => &spec.nu_minus,
        }
    }

    pub fn exponent_f64(&self, spec: &OdeSpec) -> f64 {
        to_f64(self.exponent(spec))
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "nu_plus" | "+" => Ok(Branch::NuPlus),
            "minus" | "nu_minus" | "-" => Ok(Branch::NuMinus),
            other => Err(Error::InvalidSpec(format!("unknown branch {other:?}"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::NuPlus => "plus",
            Branch::NuMinus => "minus",
        })
    }
}

/// Validated parameters of one member of the ODE family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdeSpec {
    nu_plus: RBig,
    nu_minus: RBig,
    scale: RBig,
    potential: Vec<RBig>,
    kind: SingularPointKind,
}

impl OdeSpec {
    pub fn nu_plus(&self) -> &RBig {
        &self.nu_plus
    }

    pub fn nu_minus(&self) -> &RBig {
        &self.nu_minus
    }

    pub fn scale(&self) -> &RBig {
        &self.scale
    }

    /// Potential coefficients v₀..v_N.
    pub fn potential(&self) -> &[RBig] {
        &self.potential
    }

    pub fn kind(&self) -> SingularPointKind {
        self.kind
    }

    pub fn potential_f64(&self) -> Vec<f64> {
        self.potential.iter().map(to_f64).collect()
    }

    pub fn scale_f64(&self) -> f64 {
        to_f64(&self.scale)
    }

    /// (μ - ν₊)(μ - ν₋).
    pub fn indicial(&self, mu: &RBig) -> RBig {
        (mu - &self.nu_plus) * (mu - &self.nu_minus)
    }

    /// Spacing of the index lattice that carries nonzero coefficients.
    ///
    /// aₘ couples to a_{m-1-n} only through nonzero vₙ, so with a₀ = 1 the support of
    /// the series on either branch lies in g·ℕ where g = gcd{n+1 : vₙ ≠ 0}.
    pub fn coefficient_stride(&self) -> u64 {
        self.potential
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != RBig::ZERO)
            .fold(0u64, |g, (n, _)| gcd(g, n as u64 + 1))
    }

    /// Serializes to the JSON ODE file format with exact string rationals.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "nu_plus": self.nu_plus.to_string(),
            "nu_minus": self.nu_minus.to_string(),
            "s": self.scale.to_string(),
            "v": self.potential.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Parses the JSON ODE file format
    /// `{"nu_plus": .., "nu_minus": .., "s": .., "v": [..]}`; numbers may be JSON
    /// numbers or strings such as `"1/4"`. `s` defaults to 1.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidSpec("expected a JSON object".into()))?;
        let field = |name: &str| -> Result<RBig> {
            let v = obj
                .get(name)
                .ok_or_else(|| Error::InvalidSpec(format!("missing field {name:?}")))?;
            json_rational(v)
        };
        let scale = match obj.get("s") {
            Some(v) => json_rational(v)?,
            None => RBig::ONE,
        };
        let potential = obj
            .get("v")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidSpec("missing array field \"v\"".into()))?
            .iter()
            .map(json_rational)
            .collect::<Result<Vec<_>>>()?;
        make_ode(field("nu_plus")?, field("nu_minus")?, scale, potential)
    }
}

/// Builds a validated [`OdeSpec`], inferring the singular point kind.
pub fn make_ode(nu_plus: RBig, nu_minus: RBig, scale: RBig, potential: Vec<RBig>) -> Result<OdeSpec> {
    if potential.iter().all(|v| *v == RBig::ZERO) {
        return Err(Error::EmptyPotential);
    }
    if scale <= RBig::ZERO {
        return Err(Error::NonpositiveScale(scale.to_string()));
    }
    if nu_plus < nu_minus {
        return Err(Error::RootOrdering {
            nu_plus: nu_plus.to_string(),
            nu_minus: nu_minus.to_string(),
        });
    }
    let kind = if nu_minus == RBig::ZERO && nu_plus == RBig::ONE {
        SingularPointKind::Ordinary
    } else {
        SingularPointKind::RegularSingular
    };
    Ok(OdeSpec { nu_plus, nu_minus, scale, potential, kind })
}

/// Anharmonic oscillator -Ψ'' + (y² + c²)² Ψ = 0 written in x = y².
///
/// Dividing the transformed equation by 4x gives ν₊ = 1/2, ν₋ = 0 and
/// potential [c⁴/4, c²/2, 1/4]; the ν₋ series holds the even y-coefficients.
pub fn preset_anharmonic(c: impl IntoRational) -> OdeSpec {
    quartic_in_x(&c.into_rational(), true)
}

/// Double well -Ψ'' + (y² - c²)² Ψ = 0 written in x = y²: potential [c⁴/4, -c²/2, 1/4].
pub fn preset_double_well(c: impl IntoRational) -> OdeSpec {
    quartic_in_x(&c.into_rational(), false)
}

fn quartic_in_x(c: &RBig, plus: bool) -> OdeSpec {
    let c2 = c * c;
    let quarter = ratio(1, 4);
    let v0 = &c2 * &c2 * &quarter;
    let v1 = if plus { &c2 / RBig::from(2u8) } else { -(&c2 / RBig::from(2u8)) };
    make_ode(ratio(1, 2), RBig::ZERO, RBig::ONE, vec![v0, v1, quarter])
        .expect("quartic presets are always valid")
}

/// The anharmonic oscillator in its original variable y, where the origin is an
/// ordinary point: potential (y² + c²)² = c⁴ + 2c²y² + y⁴, i.e. v₁ = c⁴, v₃ = 2c², v₅ = 1.
pub fn preset_anharmonic_y(c: impl IntoRational) -> OdeSpec {
    quartic_in_y(&c.into_rational(), true)
}

/// The double well in its original variable y (ordinary point at the origin).
pub fn preset_double_well_y(c: impl IntoRational) -> OdeSpec {
    quartic_in_y(&c.into_rational(), false)
}

fn quartic_in_y(c: &RBig, plus: bool) -> OdeSpec {
    let c2 = c * c;
    let two_c2 = &c2 * RBig::from(2u8);
    let v3 = if plus { two_c2 } else { -two_c2 };
    make_ode(
        RBig::ONE,
        RBig::ZERO,
        RBig::ONE,
        vec![RBig::ZERO, &c2 * &c2, RBig::ZERO, v3, RBig::ZERO, RBig::ONE],
    )
    .expect("quartic presets are always valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetFamily {
    Anharmonic,
    DoubleWell,
    AnharmonicY,
    DoubleWellY,
}

/// A named preset with its parameter `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preset {
    pub family: PresetFamily,
    pub c: RBig,
}

impl Preset {
    /// Parses a descriptor such as `anharmonic:c=0` or `doublewell:c=3/2`.
    pub fn parse(desc: &str) -> Result<Self> {
        let (name, args) = desc.split_once(':').unwrap_or((desc, ""));
        let mut c = RBig::ZERO;
        for arg in args.split(',').filter(|a| !a.is_empty()) {
            match arg.split_once('=') {
                Some(("c", val)) => c = parse_rational(val)?,
                _ => return Err(Error::InvalidSpec(format!("unknown preset argument {arg:?}"))),
            }
        }
        let family = match name {
            "anharmonic" => PresetFamily::Anharmonic,
            "doublewell" | "double_well" => PresetFamily::DoubleWell,
            "anharmonic_y" => PresetFamily::AnharmonicY,
            "doublewell_y" | "double_well_y" => PresetFamily::DoubleWellY,
            other => return Err(Error::InvalidSpec(format!("unknown preset {other:?}"))),
        };
        Ok(Preset { family, c })
    }

    pub fn spec(&self) -> OdeSpec {
        match self.family {
            PresetFamily::Anharmonic => preset_anharmonic(&self.c),
            PresetFamily::DoubleWell => preset_double_well(&self.c),
            PresetFamily::AnharmonicY => preset_anharmonic_y(&self.c),
            PresetFamily::DoubleWellY => preset_double_well_y(&self.c),
        }
    }

    pub fn c_f64(&self) -> f64 {
        to_f64(&self.c)
    }
}

pub fn parse_preset(desc: &str) -> Result<OdeSpec> {
    Preset::parse(desc).map(|p| p.spec())
}

/// Things that convert exactly into a rational parameter.
pub trait IntoRational {
    fn into_rational(self) -> RBig;
}

impl IntoRational for RBig {
    fn into_rational(self) -> RBig {
        self
    }
}

impl IntoRational for &RBig {
    fn into_rational(self) -> RBig {
        self.clone()
    }
}

impl IntoRational for i64 {
    fn into_rational(self) -> RBig {
        RBig::from(self)
    }
}

impl IntoRational for i32 {
    fn into_rational(self) -> RBig {
        RBig::from(self)
    }
}

/// Panics on NaN or infinity.
impl IntoRational for f64 {
    fn into_rational(self) -> RBig {
        RBig::try_from(self).expect("parameter must be finite")
    }
}

pub fn ratio(num: i64, den: u64) -> RBig {
    RBig::from_parts(IBig::from(num), den.into())
}

/// Exact parse of `p/q`, integers, decimals and scientific notation.
pub fn parse_rational(text: &str) -> Result<RBig> {
    let t = text.trim();
    let bad = || Error::InvalidNumber(text.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p = parse_rational(p)?;
        let q = parse_rational(q)?;
        if q == RBig::ZERO {
            return Err(bad());
        }
        return Ok(p / q);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: IBig = format!("{int_part}{frac_part}0").parse::<IBig>().map_err(|_| bad())? / IBig::from(10u8);
    let scale = exp - frac_part.len() as i64;
    let ten = IBig::from(10u8);
    let mut value = if scale >= 0 {
        RBig::from(digits * ten.pow(scale as usize))
    } else {
        RBig::from_parts(digits, ten.pow((-scale) as usize).unsigned_abs())
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

fn json_rational(v: &Value) -> Result<RBig> {
    match v {
        // shortest round-trip text of the JSON number, parsed exactly
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::InvalidNumber(other.to_string())),
    }
}

pub(crate) fn to_f64(r: &RBig) -> f64 {
    r.to_f64().value()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
