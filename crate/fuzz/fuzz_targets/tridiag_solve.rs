#![no_main]

use libfuzzer_sys::fuzz_target;
use qrma_core::model::TridiagonalBlock;
use qrma_core::spectrum::tridiagonal_eigen;

// Layout: [n, flags, f64 LE...]; diagonal first, then off-diagonal, zero-padded.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Some((&flags, rest)) = rest.split_first() else {
        return;
    };
    let n = usize::from(n % 64) + 1;
    let mut floats = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let diag: Vec<f64> = (0..n).map(|_| floats.next().unwrap_or(0.0)).collect();
    let offdiag: Vec<f64> = (1..n).map(|_| floats.next().unwrap_or(0.0)).collect();
    let Ok(block) = TridiagonalBlock::new(diag, offdiag) else {
        return;
    };
    let want_vectors = flags & 1 == 1;
    if let Ok(eig) = tridiagonal_eigen(&block, want_vectors) {
        assert_eq!(eig.values.len(), n);
        assert!(eig.values.iter().all(|v| v.is_finite()));
        // near-degenerate runs are ordered by leading index, not value
        let slack = if want_vectors { 1e-12 * n as f64 } else { 0.0 };
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1] + slack));
        assert_eq!(eig.vectors.len(), if want_vectors { n } else { 0 });
    }
});
