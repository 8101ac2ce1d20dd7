//! Oracle-equivalence suites at small dimensions.
//!
//! Every fast path is compared against the cubic reference on seeded random
//! inputs. The first disagreement is reported.

use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bitmat::BitMatrix;
use crate::gauss::{gauss_rref, is_rref, PlsResult};
use crate::io;
use crate::m4ri::m4ri_rref;
use crate::mul::{mul_m4rm, mul_naive, trsm_lower_left_unit};
use crate::perm::Permutation;
use crate::pls::{pls_decompose, rank, rref, Algorithm, EliminationConfig};

#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Corrupts one M4RI result, to check that the suites notice.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub suite: &'static str,
    pub case: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.suite, self.case)
    }
}

impl std::error::Error for Failure {}

/// Runs every suite; returns the number of cases checked.
pub fn run(opts: &SelftestOptions) -> Result<usize, Failure> {
    let mut t = Tally { opts: *opts, cases: 0, rng: SplitMix64::seed_from_u64(opts.seed) };
    t.rref_agreement()?;
    t.reconstruction()?;
    t.rank_exact()?;
    t.multiply()?;
    t.trsm()?;
    t.files()?;
    Ok(t.cases)
}

struct Tally {
    opts: SelftestOptions,
    cases: usize,
    rng: SplitMix64,
}

const DENSITIES: [f64; 4] = [0.01, 0.1, 0.5, 1.0];

fn fail<T>(suite: &'static str, case: String) -> Result<T, Failure> {
    Err(Failure { suite, case })
}

impl Tally {
    fn below(&mut self, n: usize) -> usize {
        (self.rng.next_u64() % n as u64) as usize
    }

    fn matrix(&mut self, max_rows: usize, max_cols: usize) -> (BitMatrix, String) {
        let (m, n) = (1 + self.below(max_rows), 1 + self.below(max_cols));
        let d = DENSITIES[self.below(DENSITIES.len())];
        let seed = self.rng.next_u64();
        (BitMatrix::random(m, n, d, seed), format!("{m}x{n} density {d} seed {seed}"))
    }

    fn configs() -> Vec<EliminationConfig> {
        let mut v = Vec::new();
        for alg in Algorithm::ALL {
            v.push(EliminationConfig::with_algorithm(alg));
        }
        v.push(EliminationConfig { cutoff_bytes: 1, ..EliminationConfig::with_algorithm(Algorithm::Pls) });
        v.push(EliminationConfig { k: 3, ..EliminationConfig::with_algorithm(Algorithm::Mmpf) });
        v.push(EliminationConfig { cutoff_bytes: 1, hybrid_threshold: 0.0, ..EliminationConfig::with_algorithm(Algorithm::Hybrid) });
        v
    }

    fn rref_agreement(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "rref agreement";
        for _ in 0..120 {
            let (a, case) = self.matrix(160, 160);
            let mut want = a.clone();
            let r = gauss_rref(&mut want);
            let mut x = a.clone();
            let rx = m4ri_rref(&mut x, 0);
            if self.opts.inject_fault && self.cases == 0 {
                let v = x.get(0, 0);
                x.set(0, 0, !v);
            }
            if (rx, &x) != (r, &want) {
                return fail(SUITE, format!("m4ri on {case}"));
            }
            for cfg in Self::configs() {
                let mut x = a.clone();
                match rref(&mut x, &cfg) {
                    Ok(rx) if rx == r && x == want => {}
                    Ok(_) => return fail(SUITE, format!("{} on {case}", cfg.algorithm)),
                    Err(e) => return fail(SUITE, format!("{} on {case}: {e}", cfg.algorithm)),
                }
            }
            if !is_rref(&want) {
                return fail(SUITE, format!("reference output not in RREF on {case}"));
            }
            self.cases += 1;
        }
        Ok(())
    }

    fn reconstruction(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "reconstruction";
        for _ in 0..60 {
            let (a, case) = self.matrix(150, 150);
            let reference = PlsResult::gauss(&a);
            for cfg in Self::configs() {
                if matches!(cfg.algorithm, Algorithm::M4ri | Algorithm::Hybrid) {
                    continue;
                }
                let res = pls_decompose(&a, &cfg).map_err(|e| Failure { suite: SUITE, case: format!("{e} on {case}") })?;
                if res.reconstruct() != a || res != reference {
                    return fail(SUITE, format!("{} on {case}", cfg.algorithm));
                }
            }
            self.cases += 1;
        }
        Ok(())
    }

    fn rank_exact(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "rank";
        for n in [1, 7, 64, 100] {
            for r in [0, 1, n / 4, n / 2, n] {
                let seed = self.rng.next_u64();
                let a = random_of_rank(n + 5, n, r, seed);
                for cfg in Self::configs() {
                    match rank(&a, &cfg) {
                        Ok(x) if x == r => {}
                        Ok(x) => return fail(SUITE, format!("{} found {x}, want {r}, seed {seed}", cfg.algorithm)),
                        Err(e) => return fail(SUITE, format!("{} on rank {r}, seed {seed}: {e}", cfg.algorithm)),
                    }
                }
                self.cases += 1;
            }
        }
        Ok(())
    }

    fn multiply(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "multiply";
        for _ in 0..60 {
            let (m, l, n) = (1 + self.below(96), 1 + self.below(96), 1 + self.below(96));
            let (sa, sb) = (self.rng.next_u64(), self.rng.next_u64());
            let a = BitMatrix::random(m, l, 0.5, sa);
            let b = BitMatrix::random(l, n, 0.5, sb);
            let want = mul_naive(&a, &b).expect("shapes agree");
            for k in 0..=6 {
                if mul_m4rm(&a, &b, k).ok().as_ref() != Some(&want) {
                    return fail(SUITE, format!("{m}x{l} by {l}x{n}, k {k}, seeds {sa} {sb}"));
                }
            }
            self.cases += 1;
        }
        Ok(())
    }

    fn trsm(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "trsm";
        for _ in 0..40 {
            let (r, n) = (1 + self.below(150), 1 + self.below(100));
            let seed = self.rng.next_u64();
            let mut l = BitMatrix::random(r, r, 0.5, seed);
            let b = BitMatrix::random(r, n, 0.5, seed ^ 1);
            let mut x = b.clone();
            trsm_lower_left_unit(&l.as_window(), &mut x.as_window_mut()).expect("square system");
            for i in 0..r {
                for j in i..r {
                    l.set(i, j, i == j);
                }
            }
            if mul_naive(&l, &x).expect("shapes agree") != b {
                return fail(SUITE, format!("{r}x{r} system with {n} right-hand sides, seed {seed}"));
            }
            self.cases += 1;
        }
        Ok(())
    }

    fn files(&mut self) -> Result<(), Failure> {
        const SUITE: &str = "file round trip";
        for _ in 0..30 {
            let (a, case) = self.matrix(70, 200);
            let mut bin = Vec::new();
            let mut text = Vec::new();
            let ok = io::write_binary(&mut bin, &a).is_ok()
                && io::write_ascii(&mut text, &a).is_ok()
                && io::read_matrix(&bin[..]).ok().as_ref() == Some(&a)
                && io::read_matrix(&text[..]).ok().as_ref() == Some(&a);
            if !ok {
                return fail(SUITE, case);
            }
            self.cases += 1;
        }
        Ok(())
    }
}

/// An `m x n` matrix of rank exactly `r`: `C * B` with `C` an `m x r` matrix
/// holding `I_r` in randomly permuted rows and `B = [I_r | X]` with randomly
/// permuted columns.
pub fn random_of_rank(m: usize, n: usize, r: usize, seed: u64) -> BitMatrix {
    assert!(r <= m.min(n), "rank {r} impossible for {m}x{n}");
    let mut rng = SplitMix64::seed_from_u64(seed);
    let rows = shuffled(m, &mut rng);
    let cols = shuffled(n, &mut rng);
    let cr = BitMatrix::random(m, r, 0.5, rng.next_u64());
    let br = BitMatrix::random(r, n, 0.5, rng.next_u64());
    let mut c = BitMatrix::new(m, r);
    for (i, &src) in rows.iter().enumerate() {
        for j in 0..r {
            c.set(i, j, if src < r { src == j } else { cr.get(src, j) });
        }
    }
    let mut b = BitMatrix::new(r, n);
    for (j, &src) in cols.iter().enumerate() {
        for i in 0..r {
            b.set(i, j, if src < r { src == i } else { br.get(i, src) });
        }
    }
    mul_naive(&c, &b).expect("shapes agree")
}

fn shuffled(n: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
    }
    v
}

/// Random transposition vector of length `n`.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let v = (0..n).map(|i| i + (rng.next_u64() % (n - i) as u64) as usize).collect();
    Permutation::from_vec(v).expect("entries in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes() {
        assert!(run(&SelftestOptions::default()).unwrap() > 300);
    }

    #[test]
    fn fault_is_caught() {
        let f = run(&SelftestOptions { inject_fault: true, ..Default::default() }).unwrap_err();
        assert_eq!(f.suite, "rref agreement");
        assert!(f.case.starts_with("m4ri"));
    }

    #[test]
    fn rank_construction() {
        for (m, n, r) in [(5, 5, 0), (5, 5, 5), (9, 4, 2), (3, 70, 3), (130, 100, 57)] {
            let mut a = random_of_rank(m, n, r, 11);
            assert_eq!((a.nrows(), a.ncols()), (m, n));
            assert_eq!(gauss_rref(&mut a), r);
        }
    }
}
