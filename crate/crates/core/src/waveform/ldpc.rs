//! Systematic irregular repeat-accumulate LDPC code with sum-product decoding.
//!
//! Each information bit joins three parity checks (chosen once, with a fixed
//! seed, so every run uses the same matrix). Parity bits form a dual-diagonal
//! accumulator chain, which makes encoding a running XOR.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::CodeSpec;
use crate::error::{IsacError, Result};
use crate::scalar::{lit, Real};

const INFO_DEGREE: usize = 3;
const MATRIX_SEED: u64 = 0x1d9c_c0de;
const LLR_CLAMP: f64 = 30.0;

/// Result of one decoding attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Hard decisions for the full codeword (information bits first).
    pub codeword: Vec<u8>,
    pub iterations: usize,
    /// True when the decision satisfies every parity check.
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    /// Variable indices attached to each check, flattened; `check_start[c]..check_start[c+1]`.
    edge_var: Vec<usize>,
    check_start: Vec<usize>,
    /// Edge indices attached to each variable.
    var_edges: Vec<Vec<usize>>,
}

impl LdpcCode {
    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        spec.validate()?;
        Self::ira(spec.block_length, spec.info_length())
    }

    /// Builds an `(n, k)` code.
    pub fn ira(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n || n - k < INFO_DEGREE {
            return Err(IsacError::Configuration(format!("cannot build ({n}, {k}) LDPC code")));
        }
        let m = n - k;
        let mut rng = ChaCha8Rng::seed_from_u64(MATRIX_SEED ^ ((n as u64) << 20) ^ k as u64);
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut order: Vec<usize> = (0..m).collect();
        for j in 0..k {
            // Least-loaded checks first, random tie-break, so row weights stay balanced.
            order.shuffle(&mut rng);
            order.sort_by_key(|&c| checks[c].len());
            for &c in order.iter().take(INFO_DEGREE) {
                checks[c].push(j);
            }
        }
        for (c, vars) in checks.iter_mut().enumerate() {
            if c > 0 {
                vars.push(k + c - 1);
            }
            vars.push(k + c);
            vars.sort_unstable();
        }
        let mut edge_var = Vec::new();
        let mut check_start = vec![0];
        let mut var_edges = vec![Vec::new(); n];
        for vars in &checks {
            for &v in vars {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        Ok(Self { n, k, edge_var, check_start, var_edges })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn info_length(&self) -> usize {
        self.k
    }

    fn num_checks(&self) -> usize {
        self.n - self.k
    }

    fn check_vars(&self, c: usize) -> &[usize] {
        &self.edge_var[self.check_start[c]..self.check_start[c + 1]]
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(IsacError::Argument(format!("{} information bits for k = {}", info.len(), self.k)));
        }
        let mut word = info.to_vec();
        word.resize(self.n, 0);
        let mut acc = 0u8;
        for c in 0..self.num_checks() {
            let s = self.check_vars(c).iter().filter(|&&v| v < self.k).fold(0u8, |a, &v| a ^ (info[v] & 1));
            acc ^= s;
            word[self.k + c] = acc;
        }
        Ok(word)
    }

    /// True when every parity check is satisfied.
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n
            && (0..self.num_checks()).all(|c| self.check_vars(c).iter().fold(0u8, |a, &v| a ^ (word[v] & 1)) == 0)
    }

    /// Flooding sum-product decoding. `llr[i] > 0` favours bit value 0.
    pub fn decode<T: Real>(&self, llr: &[T], max_iterations: usize) -> Result<DecodeOutcome> {
        if llr.len() != self.n {
            return Err(IsacError::Argument(format!("{} LLRs for n = {}", llr.len(), self.n)));
        }
        let clamp = lit::<T>(LLR_CLAMP);
        let half = lit::<T>(0.5);
        let two = lit::<T>(2.0);
        let limit = lit::<T>(1.0 - 1e-12);
        let channel: Vec<T> = llr.iter().map(|&l| l.max(-clamp).min(clamp)).collect();
        let mut to_check: Vec<T> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut to_var = vec![T::zero(); self.edge_var.len()];
        let mut word: Vec<u8> = channel.iter().map(|&l| u8::from(l < T::zero())).collect();
        if self.is_codeword(&word) {
            return Ok(DecodeOutcome { codeword: word, iterations: 0, converged: true });
        }
        let mut scratch: Vec<T> = Vec::new();
        for iter in 1..=max_iterations {
            for c in 0..self.num_checks() {
                let (a, b) = (self.check_start[c], self.check_start[c + 1]);
                scratch.clear();
                scratch.extend(to_check[a..b].iter().map(|&l| (l * half).tanh()));
                // Exclusive products via prefix/suffix passes (robust to zeros).
                let deg = b - a;
                let mut prefix = T::one();
                for i in 0..deg {
                    to_var[a + i] = prefix;
                    prefix = prefix * scratch[i];
                }
                let mut suffix = T::one();
                for i in (0..deg).rev() {
                    let p = (to_var[a + i] * suffix).max(-limit).min(limit);
                    to_var[a + i] = (two * p.atanh()).max(-clamp).min(clamp);
                    suffix = suffix * scratch[i];
                }
            }
            let mut posterior = channel.clone();
            for (v, edges) in self.var_edges.iter().enumerate() {
                for &e in edges {
                    posterior[v] = posterior[v] + to_var[e];
                }
            }
            for (w, &p) in word.iter_mut().zip(&posterior) {
                *w = u8::from(p < T::zero());
            }
            if self.is_codeword(&word) {
                return Ok(DecodeOutcome { codeword: word, iterations: iter, converged: true });
            }
            for (e, &v) in self.edge_var.iter().enumerate() {
                to_check[e] = posterior[v] - to_var[e];
            }
        }
        Ok(DecodeOutcome { codeword: word, iterations: max_iterations, converged: false })
    }
}
