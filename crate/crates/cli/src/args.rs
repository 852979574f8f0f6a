//! Value syntaxes shared by the subcommands.

use favard::expr::Expr;

const MAX_POINTS: usize = 10_000_000;

/// `k` or `lo:hi`, inclusive.
pub fn index_range(s: &str) -> Result<Vec<i64>, String> {
    let bad = || format!("index range `{s}`: expected `k` or `lo:hi`");
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let k = parse(s)?;
            (k, k)
        }
    };
    if hi < lo || hi - lo >= 100_000 {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// `lo:hi:step`; the ends are constant expressions such as `-pi`.
pub fn grid(s: &str) -> Result<Vec<f64>, String> {
    let bad = |why: &str| format!("grid `{s}`: {why}");
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(bad("expected `lo:hi:step`"));
    };
    let val = |t: &str| constant(t).map_err(|e| bad(&e));
    let (lo, hi, step) = (val(lo)?, val(hi)?, val(step)?);
    if !(step > 0.0) || hi < lo {
        return Err(bad("need lo ≤ hi and step > 0"));
    }
    let count = ((hi - lo) / step * (1.0 + 1e-12) + 1e-9).floor() + 1.0;
    if count > MAX_POINTS as f64 {
        return Err(bad("too many points"));
    }
    Ok((0..count as usize).map(|k| lo + k as f64 * step).collect())
}

pub fn constant(s: &str) -> Result<f64, String> {
    let e = Expr::parse(s).map_err(|e| format!("`{s}`: {e}"))?;
    let v = e.eval(0.0).map_err(|e| format!("`{s}`: {e}"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    if e.eval_or_nan(1.0).to_bits() != v.to_bits() {
        return Err(format!("`{s}` must not depend on x"));
    }
    Ok(v)
}

pub fn expr(s: &str) -> Result<Expr, String> {
    Expr::parse(s).map_err(|e| format!("`{s}`: {e}"))
}
