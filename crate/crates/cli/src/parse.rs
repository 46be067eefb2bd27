//! Flag value parsers. All of them run before any computation starts.

use num_rational::BigRational;
use shifted_schur::scalar::{parse_rational, rational_to_f64};
use shifted_schur::{PointConfiguration, StrictPartition};

/// A value of `q` as typed: decimal, or an exact ratio `p/q`.
#[derive(Clone, Debug)]
pub struct QValue {
    pub value: f64,
    pub exact: Option<BigRational>,
}

pub fn q_value(text: &str) -> Result<QValue, String> {
    let exact = parse_rational(text).map_err(|e| e.to_string())?;
    let value = rational_to_f64(&exact);
    if !(value > 0.0 && value < 1.0) {
        return Err(format!("q must lie in (0, 1), got {text}"));
    }
    Ok(QValue {
        value,
        exact: text.contains('/').then_some(exact),
    })
}

/// `a:b:h` → `a, a+h, …` up to `b` inclusive.
pub fn grid(text: &str) -> Result<Vec<f64>, String> {
    let fields: Vec<&str> = text.split(':').collect();
    let [a, b, h] = fields.as_slice() else {
        return Err(format!("grid must look like start:stop:step, got {text:?}"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number {s:?} in grid {text:?}"))
    };
    let (a, b, h) = (num(a)?, num(b)?, num(h)?);
    if !(a.is_finite() && b.is_finite() && h.is_finite()) || h <= 0.0 || b < a {
        return Err(format!("grid needs finite start <= stop and step > 0, got {text:?}"));
    }
    let steps = ((b - a) / h + 1e-9).floor();
    if steps > 1e6 {
        return Err(format!("grid {text:?} has more than a million points"));
    }
    Ok((0..=steps as u64).map(|k| a + k as f64 * h).collect())
}

pub fn points(text: &str) -> Result<PointConfiguration, String> {
    PointConfiguration::from_json(text).map_err(|e| e.to_string())
}

pub fn strict_partition(text: &str) -> Result<StrictPartition, String> {
    let parts: Vec<u32> = serde_json::from_str(text).map_err(|e| format!("expected a JSON array of parts: {e}"))?;
    StrictPartition::new(parts).map_err(|e| e.to_string())
}

/// Comma-separated variable values, each decimal or `p/q`.
pub fn values(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|v| {
            parse_rational(v.trim())
                .map(|r| rational_to_f64(&r))
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid("0:3:0.05").unwrap().len(), 61);
        assert_eq!(grid("2:2:1").unwrap(), vec![2.0]);
        assert!(grid("1:0:0.1").is_err());
        assert!(grid("0:1:0").is_err());
        assert!(grid("0:1").is_err());
    }

    #[test]
    fn q_values() {
        let q = q_value("1/10").unwrap();
        assert_eq!(q.value, 0.1);
        assert!(q.exact.is_some());
        assert!(q_value("0.1").unwrap().exact.is_none());
        assert!(q_value("1").is_err());
        assert!(q_value("-0.5").is_err());
    }

    #[test]
    fn variable_lists() {
        assert_eq!(values("0.2, 1/4").unwrap(), vec![0.2, 0.25]);
        assert!(values("").unwrap().is_empty());
        assert!(values("x").is_err());
    }
}
