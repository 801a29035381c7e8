//! Parsers for integer lists, F_Bob grids and numeric formatting.

/// Parses `2,3,5`, `2..5` (inclusive) or a mix such as `1,3..5`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = vec![];
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_uint(a)?, parse_uint(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_uint(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn parse_uint(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("not a non-negative integer: {s:?}"))
}

/// Parses `lo:hi:n` (n evenly spaced points, endpoints included) or a comma list of values.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let fields: Vec<&str> = s.split(':').map(str::trim).collect();
    let grid = match fields.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (parse_f64(lo)?, parse_f64(hi)?);
            let n: usize = n.parse().map_err(|_| format!("bad point count {n:?}"))?;
            match n {
                0 => vec![],
                1 => vec![lo],
                _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
            }
        }
        [_] => s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(parse_f64).collect::<Result<_, _>>()?,
        _ => return Err(format!("expected lo:hi:n or a comma list, got {s:?}")),
    };
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    Ok(grid)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("not a finite number: {s:?}")),
    }
}

/// Formats `x` with 12 significant digits, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        s.to_string()
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}
