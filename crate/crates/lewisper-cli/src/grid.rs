use lewisper::{Complex64 as C64, Error, Result};

/// `start:stop:count`, log-spaced when both ends are positive.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = |m: &str| Error::Input(format!("grid `{s}`: {m}"));
    if parts.len() != 3 {
        return Err(bad("expected start:stop:count"));
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
    if n == 0 {
        return Err(bad("count must be positive"));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad("ends must be finite"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let t = |i: usize| i as f64 / (n - 1) as f64;
    Ok(if a > 0.0 && b > 0.0 {
        let (la, lb) = (a.ln(), b.ln());
        (0..n).map(|i| (la + (lb - la) * t(i)).exp()).collect()
    } else {
        (0..n).map(|i| a + (b - a) * t(i)).collect()
    })
}

/// `lo:hi`
pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Input(format!("window `{s}`: expected lo:hi with lo < hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `re,im` or a bare real.
pub fn parse_c64(s: &str) -> Result<C64> {
    let bad = || Error::Input(format!("cannot parse `{s}` as re,im"));
    match s.split_once(',') {
        Some((a, b)) => Ok(C64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => Ok(C64::new(s.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_and_linear() {
        let g = parse_grid("0.1:10:3").unwrap();
        assert!((g[1] - 1.0).abs() < 1e-15 && (g[2] - 10.0).abs() < 1e-14);
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("2:5:1").unwrap(), vec![2.0]);
        assert!(parse_grid("1:2").is_err() && parse_grid("1:2:0").is_err());
    }

    #[test]
    fn windows_and_points() {
        assert_eq!(parse_window("9.4:9.7").unwrap(), (9.4, 9.7));
        assert!(parse_window("9.7:9.4").is_err());
        assert_eq!(parse_c64("0.5,-2").unwrap(), C64::new(0.5, -2.0));
        assert_eq!(parse_c64("3").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_c64("a,b").is_err());
    }
}
