//! Exact-arithmetic bounds on nonincident point/line configurations.
//!
//! Every quantity here is an exact integer or rational; nothing is ever
//! evaluated in floating point. In particular the square root in the
//! closed-form bound is eliminated algebraically — the integer criterion
//! `s^2 + 2qs <= q^3 + q^2 + q` decides membership — because these bounds
//! feed branch-and-bound pruning, where an off-by-one at a boundary order
//! like q = 8 would silently corrupt search results.

use num::{BigInt, BigRational, One};
use thiserror::Error;

use crate::plane::{Plane, PlaneError, PointSet};

/// Exact rational value; reduced, with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{0} is not a perfect square")]
    NotPerfectSquare(u64),
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Render a rational for CSV output: integers bare, otherwise `num/den`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Upper bound on the number of lines disjoint from any s-point set in a
/// projective plane of order q: (q^3 + q^2 + q - qs) / (q + s), exactly.
pub fn external_line_bound(q: u64, s: u64) -> Rational {
    assert!(q >= 2, "plane order is at least 2");
    let q = BigInt::from(q);
    let s = BigInt::from(s);
    let numer = (&q * &q * &q) + (&q * &q) + &q - (&q * &s);
    BigRational::new(numer, q + s)
}

/// Largest s such that an s-point, s-line nonincident set can satisfy the
/// external-line bound: the maximum integer with s^2 + 2qs <= q^3 + q^2 + q.
/// Equals floor(-q + (q+1)*sqrt(q)), and exactly 1 + (q+1)(sqrt(q) - 1)
/// when q is a perfect square.
pub fn nonincidence_bound(q: u64) -> u64 {
    assert!(q >= 2, "plane order is at least 2");
    // s^2 + 2qs <= q^3+q^2+q  <=>  (s+q)^2 <= q(q+1)^2
    let rhs = (q as u128) * (q as u128 + 1) * (q as u128 + 1);
    let s = rhs.isqrt() as u64 - q;
    debug_assert!(quadratic_criterion_holds(q, s) && !quadratic_criterion_holds(q, s + 1));
    s
}

fn quadratic_criterion_holds(q: u64, s: u64) -> bool {
    let (q, s) = (q as u128, s as u128);
    s * s + 2 * q * s <= q * q * q + q * q + q
}

/// The crossing point of the bound curve with the diagonal for perfect
/// square q: the exact integer -q + (q+1)*sqrt(q).
pub fn crossing_point(q: u64) -> Result<u64, BoundsError> {
    assert!(q >= 2, "plane order is at least 2");
    let r = q.isqrt();
    if r * r != q {
        return Err(BoundsError::NotPerfectSquare(q));
    }
    Ok((q + 1) * r - q)
}

/// The block-count lower bound r^2 v / (r + lambda(v-1)) for an
/// (r, lambda)-design on v points, exactly. With r = q+1, lambda = 1,
/// v = s it reduces to (q+1)^2 s / (q+s).
pub fn mullin_vanstone_bound(r: u64, lambda: u64, v: u64) -> Rational {
    assert!(r >= 1 && lambda >= 1 && v >= 1);
    let r = BigInt::from(r);
    let v = BigInt::from(v);
    let lambda = BigInt::from(lambda);
    let numer = &r * &r * &v;
    let denom = &r + lambda * (v - BigInt::one());
    BigRational::new(numer, denom)
}

/// The multiset of nonempty line intersections with a point set Y, together
/// with the counting identities it satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProfile {
    q: u64,
    s: u64,
    /// Nonempty intersection sizes |L ∩ Y|, ascending.
    sizes: Vec<u32>,
}

impl BlockProfile {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// |Y|
    pub fn s(&self) -> u64 {
        self.s
    }

    /// Number of nonempty blocks b = |L_Y|.
    pub fn block_count(&self) -> u64 {
        self.sizes.len() as u64
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    /// Average block size through a fixed point: (q + s) / (q + 1).
    pub fn beta_bar(&self) -> Rational {
        BigRational::new(BigInt::from(self.q + self.s), BigInt::from(self.q + 1))
    }

    /// (q+1)^2 s / (q+s); `block_count()` never falls below this.
    pub fn block_count_bound(&self) -> Rational {
        mullin_vanstone_bound(self.q + 1, 1, self.s)
    }

    /// Whether b attains the bound exactly, which happens iff all block
    /// sizes equal beta_bar (iff Y is a maximal arc).
    pub fn attains_block_bound(&self) -> bool {
        BigRational::from(BigInt::from(self.block_count())) == self.block_count_bound()
    }
}

/// Collect the nonempty line intersections of Y and check the four counting
/// identities they must satisfy in a projective plane of order q:
/// sum 1 = b, sum |B| = (q+1)s, sum C(|B|,2) = C(s,2), sum |B|^2 = s(q+s).
pub fn block_profile(plane: &Plane, y: &PointSet) -> Result<BlockProfile, PlaneError> {
    assert!(!y.is_empty(), "block profile requires a nonempty point set");
    let counts = plane.line_meet_counts(y)?;
    let mut sizes: Vec<u32> = counts.into_iter().filter(|&c| c > 0).collect();
    sizes.sort_unstable();

    let q = plane.q() as u128;
    let s = y.len() as u128;
    let sum: u128 = sizes.iter().map(|&c| c as u128).sum();
    let sum_pairs: u128 = sizes
        .iter()
        .map(|&c| (c as u128) * (c as u128 - 1) / 2)
        .sum();
    let sum_squares: u128 = sizes.iter().map(|&c| (c as u128) * (c as u128)).sum();
    assert_eq!(sum, (q + 1) * s, "every point of Y lies on q+1 lines");
    assert_eq!(
        sum_pairs,
        s * (s - 1) / 2,
        "every point pair spans one line"
    );
    assert_eq!(sum_squares, s * (q + s), "follows from the first two sums");

    Ok(BlockProfile {
        q: q as u64,
        s: s as u64,
        sizes,
    })
}

/// CSV table of the bound per order: `q,bound,is_square,attained_by_construction`.
/// `attained_by_construction` marks the orders q = 4^m where the arc
/// construction in this crate meets the bound exactly.
pub fn bound_csv(q_max: u64) -> String {
    let mut out = String::from("q,bound,is_square,attained_by_construction\n");
    for q in 2..=q_max.max(2) {
        let r = q.isqrt();
        let is_square = r * r == q;
        let attained = is_even_power_of_two(q);
        out.push_str(&format!(
            "{q},{},{is_square},{attained}\n",
            nonincidence_bound(q)
        ));
    }
    out
}

/// CSV data for the two curves whose crossing determines the bound:
/// `s,bound,diagonal` for s = 0..=s_max, with the bound written exactly
/// (integers bare, otherwise `num/den`).
pub fn figure_csv(q: u64, s_max: u64) -> String {
    let mut out = String::from("s,bound,diagonal\n");
    for s in 0..=s_max {
        out.push_str(&format!(
            "{s},{},{s}\n",
            format_rational(&external_line_bound(q, s))
        ));
    }
    out
}

fn is_even_power_of_two(q: u64) -> bool {
    q.is_power_of_two() && q.trailing_zeros().is_multiple_of(2) && q >= 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTable;
    use crate::plane::PointSet;

    #[test]
    fn external_line_bound_pinned_values() {
        assert_eq!(external_line_bound(16, 52), rational(52, 1));
        assert_eq!(external_line_bound(4, 0), rational(21, 1));
        assert_eq!(external_line_bound(8, 10), rational(28, 1)); // 504/18
    }

    #[test]
    fn nonincidence_bound_pinned_values() {
        assert_eq!(nonincidence_bound(2), 2);
        assert_eq!(nonincidence_bound(3), 3);
        assert_eq!(nonincidence_bound(4), 6);
        assert_eq!(nonincidence_bound(8), 17);
        assert_eq!(nonincidence_bound(16), 52);
        assert_eq!(nonincidence_bound(64), 456);
    }

    #[test]
    fn nonincidence_bound_matches_integer_search_oracle() {
        for q in 2..=64u64 {
            let brute = (0..)
                .take_while(|&s| quadratic_criterion_holds(q, s))
                .last()
                .unwrap();
            assert_eq!(nonincidence_bound(q), brute, "q={q}");
        }
    }

    #[test]
    fn nonincidence_bound_is_monotone() {
        for q in 2..64u64 {
            assert!(nonincidence_bound(q) <= nonincidence_bound(q + 1));
        }
    }

    #[test]
    fn crossing_point_values_and_bracket() {
        assert_eq!(crossing_point(4).unwrap(), 6);
        assert_eq!(crossing_point(16).unwrap(), 52);
        assert_eq!(crossing_point(64).unwrap(), 456);
        assert_eq!(
            crossing_point(8).unwrap_err(),
            BoundsError::NotPerfectSquare(8)
        );

        for q in 2..=64u64 {
            let s = nonincidence_bound(q);
            let at = external_line_bound(q, s);
            let after = external_line_bound(q, s + 1);
            let r = q.isqrt();
            if r * r == q {
                // Exact crossing: bound meets the diagonal.
                assert_eq!(crossing_point(q).unwrap(), s);
                assert_eq!(at, rational(s as i64, 1));
                let (cs, cq) = (s as u128, q as u128);
                assert_eq!(cs * cs + 2 * cq * cs, cq * cq * cq + cq * cq + cq);
            } else {
                // Strict bracket around the irrational crossing.
                assert!(at > rational(s as i64, 1), "q={q}");
            }
            assert!(after < rational(s as i64 + 1, 1), "q={q}");
        }
    }

    #[test]
    fn mullin_vanstone_pinned_values() {
        assert_eq!(mullin_vanstone_bound(5, 1, 6), rational(15, 1));
        assert_eq!(mullin_vanstone_bound(17, 1, 52), rational(221, 1));
        for r in 1..20 {
            for lambda in 1..4 {
                assert_eq!(mullin_vanstone_bound(r, lambda, 1), rational(r as i64, 1));
            }
        }
    }

    #[test]
    fn mullin_vanstone_reduces_to_block_bound() {
        for q in 2..=16u64 {
            for s in 1..=(q * q + q + 1) {
                let via_design = mullin_vanstone_bound(q + 1, 1, s);
                let direct =
                    BigRational::new(BigInt::from((q + 1) * (q + 1) * s), BigInt::from(q + s));
                assert_eq!(via_design, direct);
            }
        }
    }

    #[test]
    fn block_profile_two_fano_points() {
        let plane = Plane::build_pg2(&FieldTable::build(2, 1, None).unwrap());
        let y = PointSet::new(&plane, vec![0, 1]).unwrap();
        let profile = block_profile(&plane, &y).unwrap();
        assert_eq!(profile.block_count(), 5);
        assert_eq!(profile.sizes(), &[1, 1, 1, 1, 2]);
        assert!(!profile.attains_block_bound()); // 5 > 9*2/4
    }

    #[test]
    fn block_profile_single_point_is_a_pencil() {
        for (p, k) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let plane = Plane::build_pg2(&FieldTable::build(p, k, None).unwrap());
            let y = PointSet::new(&plane, vec![5]).unwrap();
            let profile = block_profile(&plane, &y).unwrap();
            assert_eq!(profile.block_count() as u32, plane.q() + 1);
            assert!(profile.sizes().iter().all(|&c| c == 1));
            // A single point is the trivial maximal (1,1)-arc: equality.
            assert!(profile.attains_block_bound());
        }
    }

    #[test]
    fn bound_csv_rows() {
        let csv = bound_csv(16);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "q,bound,is_square,attained_by_construction"
        );
        let rows: Vec<&str> = csv.lines().collect();
        assert!(rows.contains(&"2,2,false,false"));
        assert!(rows.contains(&"4,6,true,true"));
        assert!(rows.contains(&"8,17,false,false"));
        assert!(rows.contains(&"9,21,true,false")); // square, but not 4^m
        assert!(rows.contains(&"16,52,true,true"));
    }

    #[test]
    fn figure_csv_crossing_at_q16() {
        let csv = figure_csv(16, 100);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "s,bound,diagonal");
        assert_eq!(rows[1 + 52], "52,52,52");
        assert_eq!(rows[1 + 51], "51,3552/67,51");
        assert_eq!(rows[1 + 53], "53,3520/69,53");
        assert_eq!(rows.len(), 102);
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rational(52, 1)), "52");
        assert_eq!(format_rational(&rational(504, 18)), "28");
        assert_eq!(format_rational(&rational(3552, 67)), "3552/67");
    }
}
