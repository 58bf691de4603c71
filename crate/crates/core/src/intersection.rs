//! Mutual-valuation matrix M and intersection matrix I = M^-1 of the curves
//! at infinity on the compactification attached to a family of valuations.
//!
//! Row and column 0 always stand for nu_0 = -deg (series xi*x). The entry
//! m_ij = -nu_i(Psi_j at a fresh generic parameter) is computed through
//! contact-degree sums:
//!
//!   m_ij = p_i * sum_{m=1..p_j} contact_degree(psi_i, conj_m(psi_j))
//!
//! which avoids expanding the curvette elements; the expansion route is kept
//! as an independent cross-check. Entries are independent pure computations
//! and are evaluated through the data-parallel map.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::cyclo::{rat_i, Rational};
use crate::dwps::{contact_degree, Semidegree};
use crate::error::{Error, Result};
use crate::par::{par_map, seq_map};
use crate::qmatrix::QMatrix;
use crate::valuation::{evaluate_extended, generic_curvette_element, valuation_equals};

/// A compactification presented by its valuations and both matrices.
#[derive(Clone, Debug)]
pub struct CompactificationData {
    /// The user-supplied valuations nu_1..nu_k (nu_0 is implicit).
    pub valuations: Vec<Semidegree>,
    /// (k+1) x (k+1) mutual-valuation matrix, integer entries.
    pub m: QMatrix,
    /// Exact inverse; entry (i, j) is the intersection number (C_{i-1}, C_{j-1}).
    pub i: QMatrix,
}

fn check_family(valuations: &[Semidegree]) -> Result<()> {
    let nu0 = Semidegree::degree_valuation("xi");
    for (idx, psi) in valuations.iter().enumerate() {
        if psi.deg() > Rational::one() {
            return Err(Error::precondition(format!(
                "series #{} not adapted: require v(x) < 0 and v(x) <= v(y)",
                idx + 1
            )));
        }
        if valuation_equals(psi, &nu0) {
            return Err(Error::precondition(format!(
                "series #{} is the degree valuation nu_0, which is already row 0",
                idx + 1
            )));
        }
        for (jdx, other) in valuations.iter().enumerate().take(idx) {
            if valuation_equals(psi, other) {
                return Err(Error::precondition(format!(
                    "series #{} and #{} define the same valuation",
                    jdx + 1,
                    idx + 1
                )));
            }
        }
    }
    Ok(())
}

/// m_ij by the contact-degree route, with independent parameters "xi" on the
/// row series and "xistar" on the column series.
pub fn entry_contact(row: &Semidegree, col: &Semidegree) -> Result<Rational> {
    let a = row.with_param("xi");
    let b = col.with_param("xistar");
    let mut sum = Rational::zero();
    for m in 1..=b.polydromy() {
        sum += contact_degree(&a, &b, m)?;
    }
    Ok(sum * rat_i(a.polydromy() as i64))
}

/// m_ij by expanding Psi_j and evaluating coefficient-wise in the fresh
/// parameter. Used as the cross-check oracle against [`entry_contact`].
pub fn entry_expansion(row: &Semidegree, col: &Semidegree) -> Result<Rational> {
    let a = row.with_param("xi");
    let b = col.with_param("xistar");
    let psi_b = generic_curvette_element(&b)?;
    Ok(Rational::from_integer(-evaluate_extended(&a, &psi_b)?))
}

fn assemble_matrix(
    valuations: &[Semidegree],
    map: impl Fn(Vec<(usize, usize)>) -> Vec<Result<Rational>>,
) -> Result<QMatrix> {
    check_family(valuations)?;
    let n = valuations.len() + 1;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let entries = map(pairs);
    let mut m = QMatrix::zeros(n, n);
    let mut iter = entries.into_iter();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = iter.next().unwrap()?;
        }
    }
    // The computed matrix is symmetric for every valid input family; a
    // violation means a bug somewhere in the contact-degree machinery.
    if !m.is_symmetric() {
        return Err(Error::inconsistency(
            "mutual-valuation matrix is not symmetric".to_string(),
        ));
    }
    Ok(m)
}

fn family_with_nu0(valuations: &[Semidegree]) -> Vec<Semidegree> {
    let mut family = vec![Semidegree::degree_valuation("xi")];
    family.extend_from_slice(valuations);
    family
}

/// The (k+1) x (k+1) mutual-valuation matrix, row/column 0 for nu_0.
pub fn curvette_matrix(valuations: &[Semidegree]) -> Result<QMatrix> {
    let family = family_with_nu0(valuations);
    assemble_matrix(valuations, |pairs| {
        par_map(pairs, |(i, j)| entry_contact(&family[i], &family[j]))
    })
}

/// Sequential variant of [`curvette_matrix`], kept for benchmarks.
pub fn curvette_matrix_seq(valuations: &[Semidegree]) -> Result<QMatrix> {
    let family = family_with_nu0(valuations);
    assemble_matrix(valuations, |pairs| {
        seq_map(pairs, |(i, j)| entry_contact(&family[i], &family[j]))
    })
}

/// M together with its exact inverse I; a singular M signals a degenerate
/// family and is surfaced as an error.
pub fn intersection_matrix(valuations: &[Semidegree]) -> Result<CompactificationData> {
    let m = curvette_matrix(valuations)?;
    let i = m.invert()?;
    Ok(CompactificationData {
        valuations: valuations.to_vec(),
        m,
        i,
    })
}

/// Existence test for a compactification whose curves at infinity are exactly
/// the given valuations: true iff (-1)^k det(M~) < 0, where M~ drops row and
/// column 0. Returns the verdict together with det(M~).
pub fn exists_compactification(valuations: &[Semidegree]) -> Result<(bool, BigInt)> {
    let m = curvette_matrix(valuations)?;
    let k = valuations.len();
    let idx: Vec<usize> = (1..=k).collect();
    let det = m.submatrix(&idx, &idx).det_as_integer()?;
    let signed = if k % 2 == 0 { det.clone() } else { -det.clone() };
    Ok((signed.is_negative(), det))
}

/// Self-intersections after contracting the curve `index` (0-based into the
/// (k+1)-curve configuration): entry (i, j) becomes
/// (C_i, C_j) - (C_idx, C_i)(C_idx, C_j)/(C_idx, C_idx).
pub fn contract_curve(i_matrix: &QMatrix, index: usize) -> Result<QMatrix> {
    if !i_matrix.is_square() || index >= i_matrix.rows() {
        return Err(Error::precondition("contraction index out of range"));
    }
    let self_int = &i_matrix[(index, index)];
    if !self_int.is_negative() {
        return Err(Error::precondition("not contractible"));
    }
    let keep: Vec<usize> = (0..i_matrix.rows()).filter(|&r| r != index).collect();
    let mut out = QMatrix::zeros(keep.len(), keep.len());
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            let cross = &i_matrix[(index, i)] * &i_matrix[(index, j)];
            out[(a, b)] = &i_matrix[(i, j)] - cross / self_int;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;
    use crate::dwps::DwpsPoly;

    fn series(terms: &[(i64, i64, i64)], r: (i64, i64)) -> Semidegree {
        let phi = DwpsPoly::from_rational_terms(
            &terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), rat_i(c)))
                .collect::<Vec<_>>(),
        );
        Semidegree::new(phi, rat(r.0, r.1), "xi").unwrap()
    }

    /// The k = 3 family alpha_j*x + xi*x^(-3/2) with alpha in {0, 1, 2}.
    fn sharp_family() -> Vec<Semidegree> {
        (0..3)
            .map(|a| {
                let phi = if a == 0 {
                    DwpsPoly::zero()
                } else {
                    DwpsPoly::from_rational_terms(&[(rat_i(1), rat_i(a))])
                };
                Semidegree::new(phi, rat(-3, 2), "xi").unwrap()
            })
            .collect()
    }

    #[test]
    fn single_series_matrix() {
        let vals = [series(&[(1, 1, 1)], (-3, 2))];
        let m = curvette_matrix(&vals).unwrap();
        assert_eq!(m, QMatrix::from_i64(2, 2, &[1, 2, 2, -6]));

        let data = intersection_matrix(&vals).unwrap();
        let expected = QMatrix::new(
            2,
            2,
            vec![rat(3, 5), rat(1, 5), rat(1, 5), rat(-1, 10)],
        );
        assert_eq!(data.i, expected);
    }

    #[test]
    fn pure_monomial_weighted_case() {
        // xi*x^(-1/2): alpha* = -p*q with (p, q) = (2, 1).
        let vals = [series(&[], (-1, 2))];
        let m = curvette_matrix(&vals).unwrap();
        assert_eq!(m, QMatrix::from_i64(2, 2, &[1, 2, 2, -2]));
    }

    #[test]
    fn sharp_family_matrices() {
        let vals = sharp_family();
        let m = curvette_matrix(&vals).unwrap();
        let expected_m = QMatrix::from_i64(
            4,
            4,
            &[
                1, 2, 2, 2,
                2, -6, 4, 4,
                2, 4, -6, 4,
                2, 4, 4, -6,
            ],
        );
        assert_eq!(m, expected_m);

        let data = intersection_matrix(&vals).unwrap();
        let e = |n: i64, d: i64| rat(n, d);
        let expected_i = QMatrix::new(
            4,
            4,
            vec![
                e(-1, 5), e(1, 5), e(1, 5), e(1, 5),
                e(1, 5), e(-1, 10), e(0, 1), e(0, 1),
                e(1, 5), e(0, 1), e(-1, 10), e(0, 1),
                e(1, 5), e(0, 1), e(0, 1), e(-1, 10),
            ],
        );
        assert_eq!(data.i, expected_i);
        assert_eq!(data.m.mul(&data.i), QMatrix::identity(4));
    }

    #[test]
    fn contact_and_expansion_routes_agree() {
        let vals = sharp_family();
        let family = family_with_nu0(&vals);
        for i in 0..family.len() {
            for j in 0..family.len() {
                assert_eq!(
                    entry_contact(&family[i], &family[j]).unwrap(),
                    entry_expansion(&family[i], &family[j]).unwrap(),
                    "entry ({}, {})",
                    i,
                    j
                );
            }
        }
    }

    #[test]
    fn duplicate_of_nu0_is_rejected() {
        let vals = [Semidegree::degree_valuation("xi")];
        let err = intersection_matrix(&vals).unwrap_err();
        assert!(err.to_string().contains("nu_0"));
    }

    #[test]
    fn existence_examples() {
        // alpha = 1 member of the family: det M~ = -6, (-1)^1 * -6 = 6 > 0.
        let vals = [series(&[(1, 1, 1)], (-3, 2))];
        let (exists, det) = exists_compactification(&vals).unwrap();
        assert!(!exists);
        assert_eq!(det, BigInt::from(-6));

        // x^(2/3) + xi*x^(1/2): M~ = [22], (-1) * 22 < 0.
        let vals = [series(&[(2, 3, 1)], (1, 2))];
        let (exists, det) = exists_compactification(&vals).unwrap();
        assert!(exists);
        assert_eq!(det, BigInt::from(22));

        // Full k = 3 family: det of [[-6,4,4],[4,-6,4],[4,4,-6]] is 200.
        let vals = sharp_family();
        let (exists, det) = exists_compactification(&vals).unwrap();
        assert!(exists);
        assert_eq!(det, BigInt::from(200));
        // Cross-check: the corresponding I~ block is negative definite.
        let data = intersection_matrix(&vals).unwrap();
        let idx = [1usize, 2, 3];
        assert!(data.i.submatrix(&idx, &idx).is_negative_definite().unwrap());
    }

    #[test]
    fn diagonal_matches_alpha_star() {
        let vals = sharp_family();
        let m = curvette_matrix(&vals).unwrap();
        assert_eq!(m[(0, 0)], rat_i(1));
        for (j, psi) in vals.iter().enumerate() {
            assert_eq!(
                m[(j + 1, j + 1)],
                Rational::from_integer(crate::valuation::alpha_star(psi))
            );
            // m_l0 = p_l.
            assert_eq!(m[(j + 1, 0)], rat_i(psi.polydromy() as i64));
        }
    }

    #[test]
    fn contraction_of_c0_in_sharp_family() {
        let data = intersection_matrix(&sharp_family()).unwrap();
        let contracted = contract_curve(&data.i, 0).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { rat(1, 10) } else { rat(1, 5) };
                assert_eq!(contracted[(a, b)], expected, "entry ({}, {})", a, b);
            }
        }
    }

    #[test]
    fn contraction_trivial_and_error_cases() {
        let diag = QMatrix::from_i64(2, 2, &[-1, 0, 0, -1]);
        let out = contract_curve(&diag, 0).unwrap();
        assert_eq!(out, QMatrix::from_i64(1, 1, &[-1]));

        let bad = QMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
        let err = contract_curve(&bad, 0).unwrap_err();
        assert!(err.to_string().contains("not contractible"));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let vals = sharp_family();
        assert_eq!(
            curvette_matrix(&vals).unwrap(),
            curvette_matrix_seq(&vals).unwrap()
        );
    }
}
