//! SDPA sparse export of the Schur-complement SDP for the squared distance,
//!
//! ```text
//! min t  s.t.  [[t·I_n, 0, z], [0, t, s], [zᵀ, s, 1]] ⪰ 0,
//!              z = Āᵀλ,  s ≥ −b̄ᵀλ,  λ ∈ B,
//! ```
//!
//! in the primal form `min cᵀx  s.t.  Σᵢ Fᵢxᵢ − F₀ ⪰ 0`, plus a small reader
//! for checking exported files.

use std::fmt::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::eigh;
use crate::model::{natural_base, BaseKind, NominalProblem, SvecMap};

/// One nonzero upper-triangle entry of `F_mat` in block `block` (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub mat: usize,
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// A problem in SDPA sparse form. Negative block sizes are diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaProblem {
    pub m_dim: usize,
    pub block_sizes: Vec<i64>,
    pub c: Vec<f64>,
    pub entries: Vec<Entry>,
}

impl SdpaProblem {
    /// The blocks of `Σᵢ Fᵢxᵢ − F₀` at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        if x.len() != self.m_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} variables, point has {}",
                self.m_dim,
                x.len()
            )));
        }
        let mut blocks: Vec<DMatrix<f64>> = self
            .block_sizes
            .iter()
            .map(|s| {
                let k = s.unsigned_abs() as usize;
                DMatrix::zeros(k, k)
            })
            .collect();
        for e in &self.entries {
            let coef = if e.mat == 0 { -1.0 } else { x[e.mat - 1] };
            let blk = &mut blocks[e.block - 1];
            blk[(e.i - 1, e.j - 1)] += coef * e.value;
            if e.i != e.j {
                blk[(e.j - 1, e.i - 1)] += coef * e.value;
            }
        }
        Ok(blocks)
    }

    /// Smallest eigenvalue over all blocks at `x`.
    pub fn min_eigenvalue(&self, x: &[f64]) -> Result<f64> {
        let mut out = f64::INFINITY;
        for blk in self.eval(x)? {
            let (w, _) = eigh(&blk)?;
            out = out.min(w[0]);
        }
        Ok(out)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

struct Writer {
    entries: Vec<Entry>,
}

impl Writer {
    fn add(&mut self, mat: usize, block: usize, i: usize, j: usize, value: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push(Entry {
            mat,
            block,
            i,
            j,
            value,
        });
    }
}

/// Encodes the SDP with the natural base of `p`'s cone.
pub fn build_sdpa(p: &NominalProblem) -> Result<SdpaProblem> {
    let base = natural_base(p.cone);
    let (n, m) = (p.n(), p.m());
    let var_s = n + 1;
    let var_t = n + 2;
    let var_l = |i: usize| n + 3 + i;
    let m_dim = n + 2 + m;

    let mut w = Writer {
        entries: Vec::new(),
    };
    let mut block_sizes = vec![(n + 2) as i64];

    // Schur block.
    for i in 1..=n + 1 {
        w.add(var_t, 1, i, i, 1.0);
    }
    for k in 1..=n {
        w.add(k, 1, k, n + 2, 1.0);
    }
    w.add(var_s, 1, n + 1, n + 2, 1.0);
    w.add(0, 1, n + 2, n + 2, -1.0);

    // Base block and the linear functional fixed to 1 on the base.
    let normalization: Vec<(usize, f64)> = match base.kind {
        BaseKind::Simplex { .. } => (0..m).map(|i| (i, 1.0)).collect(),
        BaseKind::SocSlice { .. } => {
            block_sizes.push(m as i64);
            let blk = block_sizes.len();
            for i in 1..=m {
                w.add(0, blk, i, i, -1.0);
            }
            for i in 0..m - 1 {
                w.add(var_l(i), blk, i + 1, m, 1.0);
            }
            vec![(m - 1, 1.0)]
        }
        BaseKind::Spectraplex { q } => {
            block_sizes.push(q as i64);
            let blk = block_sizes.len();
            let map = SvecMap::new(q);
            for k in 0..m {
                let (i, j) = map.position(k);
                let v = if i == j {
                    1.0
                } else {
                    std::f64::consts::FRAC_1_SQRT_2
                };
                w.add(var_l(k), blk, i + 1, j + 1, v);
            }
            (0..q).map(|i| (map.index(i, i), 1.0)).collect()
        }
        BaseKind::SvmProduct { .. } => {
            return Err(Error::UnsupportedBase(base.kind.name().into()));
        }
    };

    // Diagonal block of linear inequalities.
    let diag = block_sizes.len() + 1;
    let mut row = 0;
    let mut next = || {
        row += 1;
        row
    };
    if let BaseKind::Simplex { .. } = base.kind {
        for i in 0..m {
            let r = next();
            w.add(var_l(i), diag, r, r, 1.0);
        }
    }
    for sign in [1.0, -1.0] {
        let r = next();
        for &(i, c) in &normalization {
            w.add(var_l(i), diag, r, r, sign * c);
        }
        w.add(0, diag, r, r, sign);
    }
    for k in 0..n {
        for sign in [1.0, -1.0] {
            let r = next();
            w.add(k + 1, diag, r, r, sign);
            for i in 0..m {
                let a = p.a_bar[(i, k)];
                if a != 0.0 {
                    w.add(var_l(i), diag, r, r, -sign * a);
                }
            }
        }
    }
    let r = next();
    w.add(var_s, diag, r, r, 1.0);
    for i in 0..m {
        if p.b_bar[i] != 0.0 {
            w.add(var_l(i), diag, r, r, p.b_bar[i]);
        }
    }
    block_sizes.push(-(row as i64));

    let mut c = vec![0.0; m_dim];
    c[var_t - 1] = 1.0;
    Ok(SdpaProblem {
        m_dim,
        block_sizes,
        c,
        entries: w.entries,
    })
}

/// SDPA sparse text for `p`. The optimal value is the squared distance.
pub fn export_sdpa(p: &NominalProblem) -> Result<String> {
    let sdp = build_sdpa(p)?;
    let (n, m) = (p.n(), p.m());
    let mut out = String::new();
    let _ = writeln!(out, "\"rrf epigraph distance SDP; optimal value is dist^2");
    let _ = writeln!(
        out,
        "\"variables: z_1..z_{n} = 1..{n}, s = {}, t = {}, lambda_1..lambda_{m} = {}..{}",
        n + 1,
        n + 2,
        n + 3,
        n + 2 + m
    );
    let _ = writeln!(out, "{} = mDIM", sdp.m_dim);
    let _ = writeln!(out, "{} = nBLOCK", sdp.block_sizes.len());
    let sizes: Vec<String> = sdp.block_sizes.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "{} = bLOCKsTRUCT", sizes.join(" "));
    let c: Vec<String> = sdp.c.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "{}", c.join(" "));
    for e in &sdp.entries {
        let _ = writeln!(out, "{} {} {} {} {}", e.mat, e.block, e.i, e.j, e.value);
    }
    Ok(out)
}

/// Reads SDPA sparse text as written by common solvers and [`export_sdpa`].
pub fn parse_sdpa(text: &str) -> Result<SdpaProblem> {
    let bad = |msg: String| Error::SchemaError(format!("SDPA: {msg}"));
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    // Header lines may carry trailing text and punctuation.
    let mut header = |what: &str| -> Result<Vec<String>> {
        let line = lines.next().ok_or_else(|| bad(format!("missing {what}")))?;
        let clean: String = line
            .chars()
            .map(|c| if "{}(),".contains(c) { ' ' } else { c })
            .collect();
        Ok(clean.split_whitespace().map(String::from).collect())
    };
    let num = |tok: &str| -> Result<f64> {
        tok.parse::<f64>()
            .map_err(|_| bad(format!("{tok:?} is not a number")))
    };

    let m_dim = num(&header("mDIM")?[0])? as usize;
    let n_block = num(&header("nBLOCK")?[0])? as usize;
    let sizes = header("block sizes")?;
    let block_sizes = sizes
        .iter()
        .take(n_block)
        .map(|t| num(t).map(|v| v as i64))
        .collect::<Result<Vec<_>>>()?;
    if block_sizes.len() != n_block {
        return Err(bad("too few block sizes".into()));
    }
    let c_tokens = header("objective")?;
    let c = c_tokens
        .iter()
        .take(m_dim)
        .map(|t| num(t))
        .collect::<Result<Vec<_>>>()?;
    if c.len() != m_dim {
        return Err(bad("objective vector is too short".into()));
    }

    let mut entries = Vec::new();
    for line in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 5 {
            return Err(bad(format!("short entry line {line:?}")));
        }
        let e = Entry {
            mat: num(tok[0])? as usize,
            block: num(tok[1])? as usize,
            i: num(tok[2])? as usize,
            j: num(tok[3])? as usize,
            value: num(tok[4])?,
        };
        let size = block_sizes
            .get(e.block.wrapping_sub(1))
            .ok_or_else(|| bad(format!("block {} out of range", e.block)))?
            .unsigned_abs() as usize;
        if e.mat > m_dim || e.i == 0 || e.j == 0 || e.i > size || e.j > size {
            return Err(bad(format!("entry out of range: {line:?}")));
        }
        if block_sizes[e.block - 1] < 0 && e.i != e.j {
            return Err(bad(format!(
                "off-diagonal entry in diagonal block: {line:?}"
            )));
        }
        entries.push(e);
    }
    Ok(SdpaProblem {
        m_dim,
        block_sizes,
        c,
        entries,
    })
}

/// Point `(z, s, t, λ)` of the exported SDP for a given `λ`, with `z = Āᵀλ`,
/// `s = max(−b̄ᵀλ, 0)` and `t = ‖(z, s)‖²`.
pub fn sdpa_point(p: &NominalProblem, lambda: &DVector<f64>) -> Vec<f64> {
    let z = p.a_bar.tr_mul(lambda);
    let s = (-p.b_bar.dot(lambda)).max(0.0);
    let t = z.norm_squared() + s * s;
    let mut x: Vec<f64> = z.iter().copied().collect();
    x.push(s);
    x.push(t);
    x.extend(lambda.iter());
    x
}
