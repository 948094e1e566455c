//! Plain-text resolvent cache.
//!
//! ```text
//! TACNODE-RESOLVENT v1
//! sigma <x>
//! m <n>
//! T <x>
//! nodes <x> ...
//! weights <x> ...
//! det <x>
//! r0 <x> ...
//! qvec <x> ...
//! pvec <x> ...
//! scalars <q> <p> <u> <v>
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use tacnode_core::operator::ResolventParts;
use tacnode_core::{AiryResolvent, Resolution};

use crate::error::CliError;
use crate::table::fmt_real;

pub const HEADER: &str = "TACNODE-RESOLVENT v1";
pub const CACHE_ENV: &str = "TACNODE_CACHE_DIR";

/// Largest accepted residual of the defining equation of `Q` on load.
const LOAD_RESIDUAL: f64 = 1e-9;

fn line(key: &str, xs: &[f64]) -> String {
    let mut s = String::from(key);
    for &x in xs {
        s.push(' ');
        s.push_str(&fmt_real(x));
    }
    s.push('\n');
    s
}

pub fn to_text(r: &AiryResolvent) -> String {
    let res = r.resolution();
    let mut s = format!("{HEADER}\n");
    s += &line("sigma", &[r.sigma()]);
    s += &format!("m {}\n", res.order);
    s += &line("T", &[res.cutoff]);
    s += &line("nodes", r.nodes());
    s += &line("weights", r.weights());
    s += &line("det", &[r.det()]);
    s += &line("r0", r.r0());
    s += &line("qvec", r.qvec());
    s += &line("pvec", r.pvec());
    s += &line("scalars", &[r.q(), r.p(), r.u(), r.v()]);
    s
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::CacheInvalid(msg.into())
}

struct Lines<'a>(std::str::Lines<'a>);

impl<'a> Lines<'a> {
    fn field(&mut self, key: &str) -> Result<&'a str, CliError> {
        let l = self
            .0
            .next()
            .ok_or_else(|| invalid(format!("missing {key}")))?;
        match l.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest),
            _ => Err(invalid(format!("expected {key}"))),
        }
    }

    fn reals(&mut self, key: &str, n: usize) -> Result<Vec<f64>, CliError> {
        let xs: Result<Vec<f64>, _> = self.field(key)?.split(' ').map(str::parse::<f64>).collect();
        let xs = xs.map_err(|e| invalid(format!("{key}: {e}")))?;
        if xs.len() != n {
            return Err(invalid(format!(
                "{key}: expected {n} values, found {}",
                xs.len()
            )));
        }
        Ok(xs)
    }
}

/// Parse and validate a cached resolvent. The quadrature frame is rebuilt
/// and must match the stored nodes and weights exactly, and the stored `Q`
/// must satisfy its defining equation at a fixed node.
pub fn from_text(text: &str) -> Result<AiryResolvent, CliError> {
    let mut it = Lines(text.lines());
    if it.0.next() != Some(HEADER) {
        return Err(invalid("bad header"));
    }
    let sigma = it.reals("sigma", 1)?[0];
    let m: usize = it.field("m")?.parse().map_err(|_| invalid("m"))?;
    let cutoff = it.reals("T", 1)?[0];
    let resolution = Resolution::new(m, cutoff).map_err(|e| invalid(e.to_string()))?;
    let nodes = it.reals("nodes", m)?;
    let weights = it.reals("weights", m)?;
    let det = it.reals("det", 1)?[0];
    let r0 = it.reals("r0", m)?;
    let qvec = it.reals("qvec", m)?;
    let pvec = it.reals("pvec", m)?;
    let s = it.reals("scalars", 4)?;
    let parts = ResolventParts {
        sigma,
        resolution,
        det,
        r0,
        qvec,
        pvec,
        q: s[0],
        p: s[1],
        u: s[2],
        v: s[3],
    };
    let r = AiryResolvent::from_parts(parts).map_err(|e| invalid(e.to_string()))?;
    let same = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits());
    if !same(&nodes, r.nodes()) || !same(&weights, r.weights()) {
        return Err(invalid("quadrature frame differs"));
    }
    let i = m / 7;
    let residual = r.q_residual_at(i).abs();
    if !(residual <= LOAD_RESIDUAL) {
        return Err(invalid(format!("residual {residual:e} at node {i}")));
    }
    Ok(r)
}

pub fn file_name(sigma: f64, res: &Resolution) -> String {
    format!(
        "resolvent-{:016x}-{}-{:016x}.txt",
        sigma.to_bits(),
        res.order,
        res.cutoff.to_bits()
    )
}

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Build a resolvent, going through the cache directory if one is given.
/// Unreadable or invalid cache files are rebuilt and overwritten; a failure
/// to write the cache is not an error.
pub fn load_or_build(
    sigma: f64,
    res: &Resolution,
    strict: bool,
    dir: Option<&Path>,
) -> Result<AiryResolvent, CliError> {
    let build = || {
        if strict {
            AiryResolvent::build_strict(sigma, res)
        } else {
            AiryResolvent::build(sigma, res)
        }
    };
    let Some(dir) = dir else {
        return Ok(build()?);
    };
    let path = dir.join(file_name(sigma, res));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(r) = from_text(&text) {
            if r.sigma().to_bits() == sigma.to_bits() {
                return Ok(r);
            }
        }
    }
    let r = build()?;
    if fs::create_dir_all(dir).is_ok() {
        let _ = fs::write(&path, to_text(&r));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AiryResolvent {
        AiryResolvent::build(-0.5, &Resolution::new(40, 12.0).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let r = small();
        let back = from_text(&to_text(&r)).unwrap();
        assert_eq!(back.q().to_bits(), r.q().to_bits());
        assert_eq!(back.det().to_bits(), r.det().to_bits());
        assert_eq!(to_text(&back), to_text(&r));
    }

    #[test]
    fn truncated_file_is_rejected() {
        let t = to_text(&small());
        let cut = &t[..t.len() / 2];
        assert!(matches!(from_text(cut), Err(CliError::CacheInvalid(_))));
    }

    #[test]
    fn other_version_is_rejected() {
        let t = to_text(&small()).replacen("v1", "v2", 1);
        assert!(matches!(from_text(&t), Err(CliError::CacheInvalid(_))));
    }

    #[test]
    fn tampered_solution_is_rejected() {
        let r = small();
        let mut parts = r.parts();
        for x in parts.qvec.iter_mut() {
            *x *= 1.0 + 1e-6;
        }
        let bad = AiryResolvent::from_parts(parts).unwrap();
        assert!(matches!(
            from_text(&to_text(&bad)),
            Err(CliError::CacheInvalid(_))
        ));
    }
}
