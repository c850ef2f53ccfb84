//! Angle tokens: decimals (`0.3`), `pi/8`, `3pi/16`.

use pwa_core::Params64;

use crate::error::{CliError, Result};

/// Parses a θ token and checks it lies in the admissible window.
pub fn parse_theta(token: &str) -> Result<f64> {
    let theta = parse_angle(token)?;
    Params64::from_theta(theta)
        .map_err(|_| CliError::Domain(format!("theta {token} = {theta} is outside (0, pi/4)")))?;
    Ok(theta)
}

/// Parses the token without the range check.
pub fn parse_angle(token: &str) -> Result<f64> {
    let err = |pos: usize, msg: &str| CliError::Parse {
        token: token.to_string(),
        pos,
        msg: msg.to_string(),
    };
    let lead = token.len() - token.trim_start().len();
    let body = token.trim();
    if body.is_empty() {
        return Err(err(0, "empty angle"));
    }
    match body.find("pi") {
        Some(at) => {
            let num = &body[..at];
            let rest = &body[at + 2..];
            let numer = if num.is_empty() {
                1
            } else {
                parse_uint(num, lead).map_err(|p| err(p, "expected an integer before pi"))?
            };
            let denom = if rest.is_empty() {
                1
            } else if let Some(d) = rest.strip_prefix('/') {
                parse_uint(d, lead + at + 3)
                    .map_err(|p| err(p, "expected an integer denominator"))?
            } else {
                return Err(err(lead + at + 2, "expected '/' after pi"));
            };
            if denom == 0 {
                return Err(err(lead + at + 3, "zero denominator"));
            }
            Ok(std::f64::consts::PI * numer as f64 / denom as f64)
        }
        None => {
            if let Some(p) = body.find(|c: char| !(c.is_ascii_digit() || "+-.eE".contains(c))) {
                return Err(err(lead + p, "unexpected character"));
            }
            body.parse::<f64>()
                .map_err(|_| err(lead, "malformed decimal"))
        }
    }
}

fn parse_uint(s: &str, offset: usize) -> std::result::Result<u64, usize> {
    if s.is_empty() {
        return Err(offset);
    }
    if let Some(p) = s.find(|c: char| !c.is_ascii_digit()) {
        return Err(offset + p);
    }
    s.parse().map_err(|_| offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn symbolic_and_decimal() {
        assert_eq!(parse_theta("pi/8").unwrap(), PI / 8.0);
        assert_eq!(parse_theta("0.3").unwrap(), 0.3);
        assert_eq!(parse_theta("3pi/16").unwrap(), 3.0 * PI / 16.0);
        assert_eq!(parse_theta(" pi/11 ").unwrap(), PI / 11.0);
    }

    #[test]
    fn out_of_window() {
        assert!(matches!(parse_theta("pi/3"), Err(CliError::Domain(_))));
        assert!(matches!(parse_theta("pi/4"), Err(CliError::Domain(_))));
        assert!(matches!(parse_theta("0"), Err(CliError::Domain(_))));
        assert!(matches!(parse_theta("-0.1"), Err(CliError::Domain(_))));
    }

    #[test]
    fn malformed_positions() {
        let pos = |t: &str| match parse_angle(t) {
            Err(CliError::Parse { pos, .. }) => pos,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(pos("pi/x"), 3);
        assert_eq!(pos("2pi8"), 3);
        assert_eq!(pos("0.3q"), 3);
        assert_eq!(pos("api/8"), 0);
        assert_eq!(pos("pi/0"), 3);
        assert_eq!(pos(""), 0);
    }
}
