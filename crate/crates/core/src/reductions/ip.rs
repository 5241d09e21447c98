//! 0-1 integer programming and the problems that reduce to it.

use std::sync::Arc;

use crate::netbuilder::Qubo;
use crate::problem::Witness;

use super::{is_true, EncodeOptions, Encoding, ReductionArtifact, ReductionError};

/// `Σ_i (C_i x − b_i)²` expanded over `x ∈ {0,1}^n`: linear
/// `c_ij² − 2 b_i c_ij`, pair `2 c_ij c_ik`, constant `Σ b_i²`. Every pair
/// is registered so the fragment is fully connected.
pub fn ip_penalty(c: &[Vec<i64>], b: &[i64]) -> Qubo {
    let n = c.first().map_or(0, Vec::len);
    let mut q = Qubo::new(n);
    for (row, &bi) in c.iter().zip(b) {
        let bi = bi as f64;
        for j in 0..n {
            let cj = row[j] as f64;
            q.add_linear(j, cj * cj - 2.0 * bi * cj);
            for k in j + 1..n {
                q.add_quad(j, k, 2.0 * cj * row[k] as f64);
            }
        }
        q.constant += bi * bi;
    }
    q.touch_all_pairs();
    q
}

/// Feasibility `Cx = b` as a penalty; with an objective `a`, adds
/// `λ aᵀx` and multiplies the penalty by `1 + λ Σ|a_j|` so no objective
/// gain outweighs a unit violation.
pub fn encode_ip01(
    c: &[Vec<i64>],
    b: &[i64],
    a: Option<&[i64]>,
    lambda: f64,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let n = c.first().map_or(0, Vec::len);
    if c.len() != b.len() || c.iter().any(|r| r.len() != n) {
        return Err(ReductionError::Unsupported("C and b shapes disagree".into()));
    }
    let mut penalty = ip_penalty(c, b);
    let decoder = Arc::new(|l: &[crate::potts::SpinLabel]| {
        Witness::Assignment(l.iter().map(|&x| is_true(x)).collect())
    });
    let mut enc = Encoding::new("ip01", n, decoder);
    if let Some(a) = a {
        if a.len() != n {
            return Err(ReductionError::Unsupported("a has the wrong length".into()));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(ReductionError::Unsupported(format!("lambda {lambda} outside (0, 1)")));
        }
        let p = 1.0 + lambda * a.iter().map(|x| x.unsigned_abs() as f64).sum::<f64>();
        let mut scaled = Qubo::new(n);
        scaled.add_scaled(&penalty, p);
        penalty = scaled;
        let mut obj = Qubo::new(n);
        for (j, &aj) in a.iter().enumerate() {
            obj.add_linear(j, lambda * aj as f64);
        }
        enc = enc.with_objective(obj);
    }
    enc.with_penalty(penalty).assemble(opts)
}

/// `Σ a_j x_j = b`.
pub fn encode_knapsack(
    a: &[i64],
    b: i64,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let mut art = encode_ip01(&[a.to_vec()], &[b], None, 0.5, opts)?;
    art.kind = "knapsack";
    Ok(art)
}

/// `Σ s_i x_i = ½ Σ s_i`; an odd total is rejected up front.
pub fn encode_number_partitioning(
    numbers: &[u64],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let total: u64 = numbers.iter().sum();
    if total % 2 == 1 {
        return Err(ReductionError::Infeasible(format!("total {total} is odd")));
    }
    let row: Vec<i64> = numbers.iter().map(|&s| s as i64).collect();
    let mut art = encode_ip01(&[row], &[(total / 2) as i64], None, 0.5, opts)?;
    art.kind = "number_partitioning";
    art.decoder = Arc::new(|l: &[crate::potts::SpinLabel]| {
        Witness::Partition(l.iter().map(|&x| is_true(x)).collect())
    });
    Ok(art)
}
