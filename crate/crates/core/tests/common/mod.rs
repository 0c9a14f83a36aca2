//! Shared helpers for the integration suites.

use parrondo_core::GameParams;

/// Collects clause failures for one acceptance criterion and prints a single
/// PASS/FAIL line when finished.
pub struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(name: &'static str) -> Self {
        Criterion {
            name,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, clause: &str, ok: bool) {
        if !ok {
            self.failures.push(clause.to_string());
        }
    }

    pub fn finish(self) {
        if self.failures.is_empty() {
            println!("PASS  {}", self.name);
        } else {
            println!("FAIL  {} — {}", self.name, self.failures.join("; "));
            panic!("{} failed: {}", self.name, self.failures.join("; "));
        }
    }
}

/// Independent oracle for the winner-count chain: assemble the explicit
/// (N+1)x(N+1) transition matrix from the rows and power-iterate it. Shares
/// nothing with the product-form solve it cross-checks.
pub fn power_iteration_stationary(params: &GameParams) -> Vec<f64> {
    let n_states = params.n_states();
    let rows = params.transition_rows();
    let mut v = vec![1.0 / n_states as f64; n_states];
    for _ in 0..500_000 {
        let mut next = vec![0.0; n_states];
        for (i, row) in rows.iter().enumerate() {
            next[i] += row.stay * v[i];
            if i + 1 < n_states {
                next[i + 1] += row.forward * v[i];
            }
            if i > 0 {
                next[i - 1] += row.backward * v[i];
            }
        }
        let diff: f64 = next
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        v = next;
        if diff < 1e-15 {
            break;
        }
    }
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}
