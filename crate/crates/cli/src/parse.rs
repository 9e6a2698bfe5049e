//! Parsers for the numeric flag formats: complex numbers such as `8`,
//! `8+0.3i`, `-0.5i`; spectral parameters `nu1,nu2`; points `y1,y2` or
//! `n1,n2,n4,n5,y1,y2`.

use sp4::special::whittaker::SpectralParam;
use sp4::symplectic::IwasawaPoint;
use sp4::C64;

pub fn complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| -> Result<f64, String> {
        let v: f64 = match x {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => x.parse().map_err(|_| bad())?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, num(&body[k..])?)),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

fn list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(complex).collect()
}

pub fn spectral(s: &str) -> Result<SpectralParam, String> {
    match list(s)?[..] {
        [a, b] => Ok(SpectralParam::new(a, b)),
        _ => Err(format!("expected nu1,nu2 but got '{s}'")),
    }
}

pub fn point(s: &str) -> Result<IwasawaPoint, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("malformed coordinate '{x}'"))
        })
        .collect::<Result<_, _>>()?;
    let g = match v[..] {
        [y1, y2] => IwasawaPoint::diagonal(y1, y2),
        [n1, n2, n4, n5, y1, y2] => IwasawaPoint::new(n1, n2, n4, n5, y1, y2),
        _ => return Err(format!("expected y1,y2 or n1,n2,n4,n5,y1,y2 but got '{s}'")),
    };
    g.validate().map_err(|e| e.to_string())?;
    Ok(g)
}
