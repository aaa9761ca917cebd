//! Small dense linear algebra over F_2 with rows packed into u32.

/// Rank of the F_2 matrix whose rows are `rows` (each `width` bits wide).
pub fn rank(rows: &[u32], width: u32) -> u32 {
    echelon(rows.to_vec(), width).len() as u32
}

/// Reduced row echelon form; returns (pivot column, row) pairs.
fn echelon(mut rows: Vec<u32>, width: u32) -> Vec<(u32, u32)> {
    let mut pivots: Vec<(u32, u32)> = Vec::new();
    for col in (0..width).rev() {
        let bit = 1u32 << col;
        let Some(idx) = rows.iter().position(|r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(idx);
        for r in rows.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        for (_, r) in pivots.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        pivots.push((col, pivot));
    }
    pivots
}

/// Basis of the kernel of the linear map given by its column images:
/// `images[j]` is the image of the j-th basis vector. Returns vectors v
/// (bit j = coefficient of basis vector j) with sum_j v_j images[j] = 0.
pub fn kernel_of_images(images: &[u32], out_width: u32) -> Vec<u32> {
    let dim = images.len() as u32;
    // Transpose: rows of the matrix are indexed by output coordinates.
    let rows: Vec<u32> = (0..out_width)
        .map(|i| {
            images
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &img)| acc | (((img >> i) & 1) << j))
        })
        .collect();
    let pivots = echelon(rows, dim);
    let pivot_cols: u32 = pivots.iter().fold(0, |acc, (c, _)| acc | (1 << c));
    (0..dim)
        .filter(|free| pivot_cols & (1 << free) == 0)
        .map(|free| {
            let mut v = 1u32 << free;
            for &(c, row) in &pivots {
                if row & (1 << free) != 0 {
                    v |= 1 << c;
                }
            }
            v
        })
        .collect()
}

/// All 2^k elements of the span of `basis`.
pub fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let extra: Vec<u32> = out.iter().map(|v| v ^ b).collect();
        out.extend(extra);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(images: &[u32], v: u32) -> u32 {
        images
            .iter()
            .enumerate()
            .filter(|(j, _)| v >> j & 1 == 1)
            .fold(0, |acc, (_, &img)| acc ^ img)
    }

    #[test]
    fn rank_of_identity_and_dependent_rows() {
        assert_eq!(rank(&[1, 2, 4, 8], 4), 4);
        assert_eq!(rank(&[3, 5, 6], 3), 2);
        assert_eq!(rank(&[0, 0], 5), 0);
    }

    #[test]
    fn kernel_matches_exhaustive_scan() {
        let cases: [&[u32]; 4] = [&[1, 1, 0], &[3, 6, 5, 0], &[1, 2, 4], &[7, 7, 7, 7, 1]];
        for images in cases {
            let dim = images.len() as u32;
            let basis = kernel_of_images(images, 8);
            let mut from_basis = span(&basis);
            from_basis.sort_unstable();
            let brute: Vec<u32> = (0..1u32 << dim).filter(|&v| apply(images, v) == 0).collect();
            assert_eq!(from_basis, brute, "{images:?}");
        }
    }
}
