//! Robustness sweep for the dual solver (development aid).

use num_complex::Complex64;
use permcert::hermitian::{GramFactor, HermitianMatrix, Matrix};
use permcert::relaxation::{rel, SolveOptions};
use permcert::rng::{complex_standard_normal, substream_rng};

fn random_hpsd(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = substream_rng(seed, 0);
    let cols: Vec<Vec<Complex64>> =
        (0..n).map(|_| (0..n).map(|_| complex_standard_normal(&mut rng)).collect()).collect();
    GramFactor::from_columns(cols).unwrap().gram_matrix()
}

fn main() {
    let opts = SolveOptions::default();
    let mut fails = 0usize;
    let mut worst_iters = 0u64;
    let mut worst_case = (0usize, 0u64);
    let mut total = 0usize;
    let t0 = std::time::Instant::now();
    for n in 3..=10usize {
        for seed in 0..100u64 {
            total += 1;
            let a = random_hpsd(n, 1000 * n as u64 + seed);
            match rel(&a, &opts) {
                Ok(out) => {
                    let ok = out.solution.converged
                        && out.solution.gap_ratio <= 1.0 + 1e-6
                        && out.certificate.validated;
                    if !ok {
                        fails += 1;
                        println!(
                            "FAIL n={n} seed={seed} conv={} gap={} valid={}",
                            out.solution.converged,
                            out.solution.gap_ratio,
                            out.certificate.validated
                        );
                    }
                    if out.solution.iterations > worst_iters {
                        worst_iters = out.solution.iterations;
                        worst_case = (n, seed);
                    }
                }
                Err(e) => {
                    fails += 1;
                    println!("ERROR n={n} seed={seed}: {e}");
                }
            }
        }
    }
    println!(
        "small sweep: {total} instances, fails={fails}, worst_iters={worst_iters} at n={} seed={}, t={:?}",
        worst_case.0,
        worst_case.1,
        t0.elapsed()
    );

    // Larger dimensions: 3 seeds each, track solver rank for the sqrt law.
    let t1 = std::time::Instant::now();
    for n in [15usize, 20, 25, 30, 35, 40] {
        for seed in 0..3u64 {
            let a = random_hpsd(n, 5000 + n as u64 * 17 + seed);
            match rel(&a, &opts) {
                Ok(out) => {
                    let lam_max = {
                        let eig = permcert::hermitian::eigh(&out.solution.p).unwrap();
                        eig.eigenvalues[0]
                    };
                    let rank = {
                        let eig = permcert::hermitian::eigh(&out.solution.p).unwrap();
                        eig.eigenvalues.iter().filter(|&&x| x > 1e-9 * lam_max).count()
                    };
                    println!(
                        "n={n} seed={seed} conv={} gap-1={:.2e} iters={} rank={} sqrt_bound={:.2}",
                        out.solution.converged,
                        out.solution.gap_ratio - 1.0,
                        out.solution.iterations,
                        rank,
                        ((n + 1) as f64).sqrt()
                    );
                }
                Err(e) => println!("ERROR n={n} seed={seed}: {e}"),
            }
        }
    }
    println!("large sweep t={:?}", t1.elapsed());

    // Structured classes.
    let t2 = std::time::Instant::now();
    let mut structured_fails = 0usize;
    for n in [4usize, 8, 12] {
        // Circulant.
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let k = (j + n - i) % n;
                let val = match k {
                    0 => 2.0,
                    1 => 1.0,
                    _ if k == n - 1 => 1.0,
                    _ => 0.25,
                };
                m.set(i, j, Complex64::new(val, 0.0));
            }
        }
        let a = HermitianMatrix::new(m).unwrap();
        let out = rel(&a, &SolveOptions::default());
        match out {
            Ok(o) if o.solution.converged && o.certificate.validated => {}
            Ok(o) => {
                structured_fails += 1;
                println!("STRUCT FAIL circulant n={n} gap={}", o.solution.gap_ratio);
            }
            Err(e) => {
                structured_fails += 1;
                println!("STRUCT ERROR circulant n={n}: {e}");
            }
        }
    }
    println!("structured fails={structured_fails}, t={:?}", t2.elapsed());
}
