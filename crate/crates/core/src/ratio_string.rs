//! Serde adapter writing exact rationals as `"p/q"` strings (lowest terms,
//! positive denominator). Use with `#[serde(with = "crate::ratio_string")]`.

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serializer};

pub fn format(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal expansion rounded half away from zero to `places` digits.
pub fn decimal(r: &Ratio<i64>, places: u32) -> String {
    let scale = 10i128.pow(places);
    let (p, q) = (*r.numer() as i128, *r.denom() as i128);
    let scaled = (2 * p.abs() * scale + q) / (2 * q);
    let sign = if p < 0 && scaled != 0 { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{scaled}");
    }
    let (int, frac) = (scaled / scale, scaled % scale);
    format!("{sign}{int}.{frac:0width$}", width = places as usize)
}

pub fn parse(s: &str) -> Option<Ratio<i64>> {
    let (p, q) = s.split_once('/')?;
    let p: i64 = p.trim().parse().ok()?;
    let q: i64 = q.trim().parse().ok()?;
    if q == 0 {
        return None;
    }
    Some(Ratio::new(p, q))
}

pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| de::Error::custom(format!("not a rational p/q: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_positive_denominator() {
        assert_eq!(format(&Ratio::new(6, -4)), "-3/2");
        assert_eq!(format(&Ratio::from_integer(3)), "3/1");
        assert_eq!(parse("-3/2"), Some(Ratio::new(-3, 2)));
        assert_eq!(parse("4/0"), None);
        assert_eq!(parse("4"), None);
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&Ratio::from_integer(3), 6), "3.000000");
        assert_eq!(decimal(&Ratio::new(125, 43), 6), "2.906977");
        assert_eq!(decimal(&Ratio::new(-1, 3), 2), "-0.33");
        assert_eq!(decimal(&Ratio::new(5, 2), 0), "3");
    }
}
