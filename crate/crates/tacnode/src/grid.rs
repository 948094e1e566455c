//! Kernel values on a `u × v` grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tacnode_core::rh::rh_kernel_direct;
use tacnode_core::{FvParams, RhParams, TailSpec};

use crate::error::CliError;
use crate::table::{csv_string, parse_csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Compact resolvent form.
    Fv,
    /// Six-term expansion.
    Sixterm,
    /// Riemann–Hilbert form, evaluated directly.
    Rh,
    /// Integral of the rank-two σ-derivative.
    Tail,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fv => "fv",
            Method::Sixterm => "sixterm",
            Method::Rh => "rh",
            Method::Tail => "tail",
        }
    }
}

/// Everything needed to reproduce a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub method: Method,
    pub lambda: f64,
    #[serde(rename = "Sigma")]
    pub big_sigma: f64,
    pub sigma: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub m: usize,
    #[serde(rename = "T")]
    pub cutoff: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tail: Option<TailMeta>,
    pub version: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailMeta {
    pub span: f64,
    pub nodes: usize,
    pub gate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelGrid {
    pub meta: GridMeta,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Row-major, `values[i * v.len() + j] = K(u[i], v[j])`.
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridData {
    u: Vec<f64>,
    v: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    meta: GridMeta,
    data: GridData,
}

impl KernelGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.v.len() + j]
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        if self.v.is_empty() {
            return vec![Vec::new(); self.u.len()];
        }
        self.values
            .chunks(self.v.len())
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// One `u,v,value` line per cell in row-major order.
    pub fn to_csv(&self) -> String {
        let mut rows = Vec::with_capacity(self.values.len());
        for (i, &u) in self.u.iter().enumerate() {
            for (j, &v) in self.v.iter().enumerate() {
                rows.push([u, v, self.get(i, j)]);
            }
        }
        csv_string(&["u", "v", "value"], rows)
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let file = GridFile {
            meta: self.meta.clone(),
            data: GridData {
                u: self.u.clone(),
                v: self.v.clone(),
                values: self.rows(),
            },
        };
        crate::table::json_string(&file)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let f: GridFile = serde_json::from_str(text)?;
        if f.data.values.len() != f.data.u.len()
            || f.data.values.iter().any(|r| r.len() != f.data.v.len())
        {
            return Err(CliError::Usage("grid dimensions are inconsistent".into()));
        }
        Ok(KernelGrid {
            meta: f.meta,
            u: f.data.u,
            v: f.data.v,
            values: f.data.values.concat(),
        })
    }

    /// Values from a CSV written by [`KernelGrid::to_csv`]; the metadata is
    /// taken from `meta`.
    pub fn values_from_csv(text: &str) -> Result<Vec<f64>, CliError> {
        let (_, rows) = parse_csv(text)?;
        Ok(rows.iter().map(|r| r[2]).collect())
    }
}

pub fn meta(params: &FvParams, method: Method, tail: &TailSpec) -> GridMeta {
    let res = params.resolvent().resolution();
    GridMeta {
        method,
        lambda: params.lambda(),
        big_sigma: params.big_sigma(),
        sigma: params.sigma(),
        tau1: params.tau1(),
        tau2: params.tau2(),
        m: res.order,
        cutoff: res.cutoff,
        tail: (method == Method::Tail).then_some(TailMeta {
            span: tail.span,
            nodes: tail.nodes,
            gate: tail.gate,
        }),
        version: crate::VERSION.to_string(),
    }
}

/// One row of the grid; every cell is a pure function of `(u, v)` and the
/// parameters, so rows may be computed in any order.
fn row(
    params: &FvParams,
    rh: Option<&(RhParams, RhParams)>,
    method: Method,
    u: f64,
    vs: &[f64],
    tail: &TailSpec,
) -> Result<Vec<f64>, CliError> {
    Ok(match method {
        Method::Fv => params.kernel_matrix(&[u], vs),
        Method::Sixterm => vs
            .iter()
            .map(|&v| params.kernel_sixterm(u, v))
            .collect::<Result<_, _>>()?,
        Method::Rh => {
            let (plus, minus) = rh.expect("rh parameters");
            vs.iter()
                .map(|&v| rh_kernel_direct(plus, minus, u, v))
                .collect::<Result<_, _>>()?
        }
        Method::Tail => params.kernel_tail_matrix(&[u], vs, tail)?,
    })
}

/// Evaluate the kernel on `us × vs`. With `parallel` the rows go to the
/// current rayon pool; the result is identical either way.
pub fn evaluate(
    params: &FvParams,
    method: Method,
    us: &[f64],
    vs: &[f64],
    tail: &TailSpec,
    parallel: bool,
) -> Result<KernelGrid, CliError> {
    let rh = match method {
        Method::Rh => {
            if !params.is_single_time() {
                return Err(tacnode_core::Error::MultiTimeUnsupported.into());
            }
            let res = params.resolvent().resolution();
            let plus = RhParams::from_fv(params.lambda(), params.big_sigma(), params.tau1(), &res)?;
            let minus = plus.negated();
            Some((plus, minus))
        }
        _ => None,
    };
    let rows: Vec<Vec<f64>> = if parallel {
        us.par_iter()
            .map(|&u| row(params, rh.as_ref(), method, u, vs, tail))
            .collect::<Result<_, _>>()?
    } else {
        us.iter()
            .map(|&u| row(params, rh.as_ref(), method, u, vs, tail))
            .collect::<Result<_, _>>()?
    };
    Ok(KernelGrid {
        meta: meta(params, method, tail),
        u: us.to_vec(),
        v: vs.to_vec(),
        values: rows.concat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tacnode_core::Resolution;

    fn params() -> FvParams {
        FvParams::single_time(1.0, 1.0, 0.0, &Resolution::new(40, 12.0).unwrap()).unwrap()
    }

    #[test]
    fn parallel_equals_serial() {
        let p = params();
        let us = [-1.0, 0.0, 0.5];
        let vs = [-0.3, 0.0, 1.0, 2.0];
        for m in [Method::Fv, Method::Sixterm, Method::Rh] {
            let a = evaluate(&p, m, &us, &vs, &TailSpec::default(), false).unwrap();
            let b = evaluate(&p, m, &us, &vs, &TailSpec::default(), true).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
        }
    }

    #[test]
    fn methods_agree() {
        let p = params();
        let us = [-1.0, 0.5];
        let vs = [-0.3, 1.0];
        let fv = evaluate(&p, Method::Fv, &us, &vs, &TailSpec::default(), false).unwrap();
        for m in [Method::Sixterm, Method::Rh, Method::Tail] {
            let g = evaluate(&p, m, &us, &vs, &TailSpec::default(), false).unwrap();
            for (a, b) in fv.values.iter().zip(&g.values) {
                assert!((a - b).abs() < 1e-8, "{m:?}: {a} {b}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = params();
        let g = evaluate(
            &p,
            Method::Fv,
            &[0.0, 1.0],
            &[0.5],
            &TailSpec::default(),
            false,
        )
        .unwrap();
        let back = KernelGrid::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        let csv = KernelGrid::values_from_csv(&g.to_csv()).unwrap();
        assert_eq!(csv, g.values);
    }

    #[test]
    fn rh_rejects_two_times() {
        let p = params().with_times(0.0, 0.2).unwrap();
        assert!(matches!(
            evaluate(&p, Method::Rh, &[0.0], &[1.0], &TailSpec::default(), false),
            Err(CliError::Numerical(
                tacnode_core::Error::MultiTimeUnsupported
            ))
        ));
    }
}
