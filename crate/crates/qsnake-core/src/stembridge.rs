//! The q = −1 phenomenon on level sets of the odd snake family under the
//! reflection involution: a polynomial X(q) per level whose exponents are
//! realized by a weight on matchings and whose value at −1 counts the
//! symmetric ones.

use crate::kronecker::KroneckerGraph;
use crate::qarith::{binomial, gauss_binom, QLaurent};
use crate::snake::Matching;
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StembridgeError {
    #[error("level ({p},{r}) violates p+r ≤ n = {n}")]
    OutOfDomain { p: i64, r: i64, n: i64 },
    #[error("matching lies in level ({0},{1}), not ({2},{3})")]
    LevelMismatch(i64, i64, i64, i64),
    #[error("weight is not a nonnegative integer: doubled value {0}")]
    BadWeight(i64),
}

/// One level of one graph: the polynomial, the involution count, and the
/// level size.
#[derive(Debug, Clone)]
pub struct StembridgeInstance {
    pub n: i64,
    pub p: i64,
    pub r: i64,
    pub x: QLaurent,
    pub level_size: usize,
    pub fixed_count: usize,
}

fn check_domain(p: i64, r: i64, n: i64) -> Result<(), StembridgeError> {
    if p < 0 || r < 0 || p + r > n {
        return Err(StembridgeError::OutOfDomain { p, r, n });
    }
    Ok(())
}

/// X(q) = (n−r over p)_q · (n+1−p over r)_q, an ordinary polynomial in q.
pub fn x_poly(p: i64, r: i64, n: i64) -> Result<QLaurent, StembridgeError> {
    check_domain(p, r, n)?;
    let a = gauss_binom((n - r) as u32, p as u32).expect("in range given p+r ≤ n");
    let b = gauss_binom((n + 1 - p) as u32, r as u32).expect("in range given p+r ≤ n");
    Ok(&a * &b)
}

/// w(P) = [r + (n−r−p)(p+r)]/2 + α(P) for P in level (p,r); always a
/// nonnegative integer on its domain.
pub fn w_weight(
    kg: &KroneckerGraph,
    m: &Matching,
    p: i64,
    r: i64,
) -> Result<u64, StembridgeError> {
    let n = kg.n() as i64;
    check_domain(p, r, n)?;
    let (lp, lr) = kg.level_of(m);
    if (lp, lr) != (p, r) {
        return Err(StembridgeError::LevelMismatch(lp, lr, p, r));
    }
    let doubled = r + (n - r - p) * (p + r) + kg.alpha_doubled_of(m);
    if doubled < 0 || doubled % 2 != 0 {
        return Err(StembridgeError::BadWeight(doubled));
    }
    Ok((doubled / 2) as u64)
}

/// Number of reflection-fixed matchings in the level.
pub fn fixed_points(p: i64, r: i64, n: i64) -> Result<usize, StembridgeError> {
    check_domain(p, r, n)?;
    let kg = KroneckerGraph::g(n as usize);
    Ok(count_fixed(&kg, p, r))
}

fn count_fixed(kg: &KroneckerGraph, p: i64, r: i64) -> usize {
    kg.matchings()
        .iter()
        .filter(|m| {
            kg.level_of(m) == (p, r)
                && kg.graph().reflect_matching(m).expect("odd straight palindromic") == **m
        })
        .count()
}

/// The two-case closed evaluation of X(−1): zero exactly on the four parity
/// classes, otherwise a product of halved binomials.
pub fn x_at_minus_one_closed(p: i64, r: i64, n: i64) -> Result<BigInt, StembridgeError> {
    check_domain(p, r, n)?;
    let class = (p % 2, r % 2, n % 2);
    if [(1, 0, 0), (1, 1, 1), (0, 1, 1), (1, 1, 0)].contains(&class) {
        return Ok(BigInt::from(0));
    }
    Ok(binomial((n - r) / 2, p / 2) * binomial((n + 1 - p) / 2, r / 2))
}

/// Assemble one instance and check every claim on it: X realized by the
/// weight multiset, X(1) the level size, X(−1) the fixed-point count and the
/// closed two-case value, the level polynomial palindromic, orbit parity.
pub fn instance(kg: &KroneckerGraph, p: i64, r: i64) -> Result<StembridgeInstance, String> {
    let n = kg.n() as i64;
    let x = x_poly(p, r, n).map_err(|e| e.to_string())?;
    let level: Vec<&Matching> =
        kg.matchings().iter().filter(|m| kg.level_of(m) == (p, r)).collect();
    let mut from_weights = QLaurent::zero();
    let mut level_poly = QLaurent::zero();
    for m in &level {
        let w = w_weight(kg, m, p, r).map_err(|e| e.to_string())?;
        from_weights = &from_weights + &QLaurent::term(2 * w as i64, BigInt::from(1));
        level_poly = &level_poly + &QLaurent::q_half(kg.alpha_doubled_of(m));
    }
    if from_weights != x {
        return Err(format!("weight multiset misses X at ({p},{r},{n})"));
    }
    if !x.has_integral_exponents() || x.min_doubled_exp().unwrap_or(0) < 0 {
        return Err(format!("X is not an ordinary polynomial at ({p},{r},{n})"));
    }
    if level_poly.bar() != level_poly {
        return Err(format!("level polynomial not palindromic at ({p},{r},{n})"));
    }
    if x.eval_at_one() != BigInt::from(level.len()) {
        return Err(format!("X(1) is not the level size at ({p},{r},{n})"));
    }
    let fixed = count_fixed(kg, p, r);
    let at_m1 = x.eval_int(-1).map_err(|e| e.to_string())?;
    if at_m1 != BigInt::from(fixed) {
        return Err(format!("X(−1) ≠ fixed count at ({p},{r},{n})"));
    }
    if at_m1 != x_at_minus_one_closed(p, r, n).map_err(|e| e.to_string())? {
        return Err(format!("two-case evaluation disagrees at ({p},{r},{n})"));
    }
    if (level.len() - fixed) % 2 != 0 {
        return Err(format!("orbit parity violated at ({p},{r},{n})"));
    }
    Ok(StembridgeInstance { n, p, r, x, level_size: level.len(), fixed_count: fixed })
}

/// Every level with p+r ≤ n for all n up to the bound.
pub fn verify_phenomenon(n_max: usize) -> Result<Vec<StembridgeInstance>, String> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let kg = KroneckerGraph::g(n);
        let ni = n as i64;
        for p in 0..=ni {
            for r in 0..=ni - p {
                out.push(instance(&kg, p, r)?);
            }
        }
    }
    Ok(out)
}

/// CSV rows, one per level, in (n, p, r) order.
pub fn csv_table(n_max: usize) -> Result<String, String> {
    let mut out = String::from("n,p,r,level_size,x_at_minus_one,fixed_count,pass\n");
    for inst in verify_phenomenon(n_max)? {
        let at_m1 = inst.x.eval_int(-1).map_err(|e| e.to_string())?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            inst.n,
            inst.p,
            inst.r,
            inst.level_size,
            at_m1,
            inst.fixed_count,
            at_m1 == BigInt::from(inst.fixed_count)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::qint;

    #[test]
    fn x_poly_worked_examples() {
        assert!(x_poly(0, 0, 5).unwrap().is_one());
        // (1,0,2): gauss(2,1)·gauss(2,0) = 1 + q
        let x = x_poly(1, 0, 2).unwrap();
        assert_eq!(x, qint(2).shift(1));
        assert!(matches!(x_poly(2, 1, 2), Err(StembridgeError::OutOfDomain { .. })));
        assert!(matches!(x_poly(-1, 0, 2), Err(StembridgeError::OutOfDomain { .. })));
    }

    #[test]
    fn fixed_point_worked_examples() {
        assert_eq!(fixed_points(0, 0, 2).unwrap(), 1);
        assert_eq!(fixed_points(1, 0, 2).unwrap(), 0);
        assert_eq!(fixed_points(1, 0, 1).unwrap(), 1);
    }

    #[test]
    fn weight_domain_errors() {
        let kg = KroneckerGraph::g(2);
        // the minimum lives in the excluded corner level (0, n+1)
        let err = w_weight(&kg, kg.p_min(), 0, 3);
        assert!(matches!(err, Err(StembridgeError::OutOfDomain { .. })));
        let top = kg
            .matchings()
            .iter()
            .find(|m| kg.level_of(m) == (0, 0))
            .cloned()
            .unwrap();
        assert!(matches!(
            w_weight(&kg, &top, 1, 0),
            Err(StembridgeError::LevelMismatch(0, 0, 1, 0))
        ));
        assert_eq!(w_weight(&kg, &top, 0, 0).unwrap(), 0);
    }

    #[test]
    fn phenomenon_small() {
        let instances = verify_phenomenon(4).unwrap();
        assert_eq!(
            instances.iter().filter(|i| i.n == 4).count(),
            15,
            "levels with p+r ≤ 4"
        );
    }

    #[test]
    fn csv_shape() {
        let table = csv_table(2).unwrap();
        let mut lines = table.lines();
        assert_eq!(lines.next(), Some("n,p,r,level_size,x_at_minus_one,fixed_count,pass"));
        // n=0: 1 level, n=1: 3, n=2: 6
        assert_eq!(table.lines().count(), 1 + 1 + 3 + 6);
        assert!(table.lines().skip(1).all(|l| l.ends_with(",true")));
        assert_eq!(lines.next(), Some("0,0,0,1,1,1,true"));
    }
}
