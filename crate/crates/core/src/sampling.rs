//! Seeded random elements for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ratio, ChartRef, GradingKind, Poly, Rational, RawTerm};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn parity(&mut self) -> u8 {
        self.rng.gen_range(0..2)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coefficient(&mut self) -> Rational {
        let mut n = self.rng.gen_range(-3i64..=3);
        if n == 0 {
            n = 1;
        }
        ratio(n, self.rng.gen_range(1..=2))
    }

    /// Unnormalized products with repeated and misordered factors.
    pub fn raw_terms(&mut self, chart: &ChartRef, n: usize) -> Vec<RawTerm> {
        (0..n)
            .map(|_| {
                let len = self.rng.gen_range(0..5);
                RawTerm {
                    coeff: self.coefficient(),
                    factors: (0..len)
                        .map(|_| {
                            let v = self.rng.gen_range(0..chart.len());
                            (chart.var(v).name.clone(), self.rng.gen_range(1..3))
                        })
                        .collect(),
                }
            })
            .collect()
    }

    /// A random monomial in `vars` (at most four factors) with a random coefficient.
    pub fn monomial_poly(&mut self, chart: &ChartRef, vars: &[usize]) -> Poly {
        let len = self.rng.gen_range(0..4);
        let mut p = Poly::constant(chart, self.coefficient());
        for _ in 0..len {
            let v = vars[self.rng.gen_range(0..vars.len())];
            let e = if chart.is_odd(v) { 1 } else { self.rng.gen_range(1..3) };
            let next = &p * &Poly::var(chart, v).pow(e);
            if !next.is_zero() {
                p = next;
            }
        }
        p
    }

    /// Sum of up to `n_terms` random monomials sharing the given parity.
    pub fn poly_with_parity(&mut self, chart: &ChartRef, vars: &[usize], parity: u8, n_terms: usize) -> Poly {
        let mut out = Poly::zero(chart);
        for _ in 0..8 * n_terms {
            if out.len() >= n_terms {
                break;
            }
            let m = self.monomial_poly(chart, vars);
            if m.parity().ok() == Some(parity) {
                out += &m;
            }
        }
        out
    }

    /// Sum of random monomials all agreeing with the first one in every listed grading.
    pub fn homogeneous(&mut self, chart: &ChartRef, vars: &[usize], kinds: &[GradingKind], n_terms: usize) -> Poly {
        let first = self.monomial_poly(chart, vars);
        let target: Vec<_> = kinds.iter().map(|k| first.grading_of(*k).ok()).collect();
        let mut out = first;
        for _ in 0..8 * n_terms {
            if out.len() >= n_terms {
                break;
            }
            let m = self.monomial_poly(chart, vars);
            let g: Vec<_> = kinds.iter().map(|k| m.grading_of(*k).ok()).collect();
            if g == target {
                out += &m;
            }
        }
        out
    }
}
