//! Independent cross-check for the recurrence engine.
//!
//! The engine computes kernels by inclusion-exclusion and moments by
//! divide-by-varpi recurrences. This oracle shares neither route: it builds
//! the one-round transition law by enumerating all m^k hand assignments of k
//! players with exact rational weights, then treats the round count as
//! absorption in a finite Markov chain and solves the linear systems by
//! Gaussian elimination. Agreement is therefore evidence for both sides.
//!
//! Everything here is exact rational arithmetic; sizes are kept tiny
//! (n <= 6 or so) because the enumeration is m^k per state.

use num::{BigRational, One, Zero};

use janken_core::{GameSpec, HandSet};

/// One-round outcome distribution for k live players: `to[j]` is the exact
/// probability that j players survive the round (j = k means a tie).
pub struct RoundLaw {
    pub to: Vec<BigRational>,
}

/// Enumerate every assignment of hands to k players and classify each by
/// scanning the WOD list for the shown support.
pub fn round_law(spec: &GameSpec, k: usize) -> RoundLaw {
    assert!(k >= 2);
    let m = spec.m;
    let mut to = vec![BigRational::zero(); k + 1];
    let mut hands = vec![0usize; k];
    loop {
        let mut weight = BigRational::one();
        let mut support = HandSet::from_hands([]);
        for &h in &hands {
            weight *= spec.probs[h].clone();
            support = support | HandSet::singleton(h);
        }
        let survivors = match spec.wod_for_support(support) {
            Some(wod) => hands.iter().filter(|&&h| wod.winners.contains(h)).count(),
            None => k,
        };
        to[survivors] += weight;
        // Odometer over base-m digits.
        let mut i = 0;
        loop {
            if i == k {
                let total: BigRational = to.iter().cloned().sum();
                assert!(total.is_one(), "round law must be a distribution");
                return RoundLaw { to };
            }
            hands[i] += 1;
            if hands[i] < m {
                break;
            }
            hands[i] = 0;
            i += 1;
        }
    }
}

/// Solve A x = b by Gaussian elimination with exact pivoting.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("transient system is nonsingular");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = a[col][c].clone() / p.clone();
        }
        b[col] = b[col].clone() / p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
            }
            b[r] = b[r].clone() - f * b[col].clone();
        }
    }
    b
}

/// The absorbing-chain view of one game up to n players.
pub struct ChainOracle {
    pub n: usize,
    /// laws[k] for k in 2..=n (index k - 2).
    pub laws: Vec<RoundLaw>,
}

impl ChainOracle {
    pub fn build(spec: &GameSpec, n: usize) -> ChainOracle {
        let laws = (2..=n).map(|k| round_law(spec, k)).collect();
        ChainOracle { n, laws }
    }

    fn law(&self, k: usize) -> &RoundLaw {
        &self.laws[k - 2]
    }

    /// I - Q over transient states 2..=n.
    fn i_minus_q(&self) -> Vec<Vec<BigRational>> {
        let dim = self.n - 1;
        let mut a = vec![vec![BigRational::zero(); dim]; dim];
        for k in 2..=self.n {
            let row = k - 2;
            for j in 2..=k {
                a[row][j - 2] = -self.law(k).to[j].clone();
            }
            a[row][row] += BigRational::one();
        }
        a
    }

    fn solve_against(&self, c: Vec<BigRational>) -> Vec<BigRational> {
        solve(self.i_minus_q(), c)
    }

    /// E(X_k) for k in 2..=n: expected rounds to reach one player.
    pub fn expected_rounds(&self) -> Vec<BigRational> {
        self.solve_against(vec![BigRational::one(); self.n - 1])
    }

    /// Var(X_k): from E(X) and the resolvent identity
    /// E(X^2) = (2N - I) t with N = (I - Q)^{-1}, t = N 1.
    pub fn variance_rounds(&self) -> Vec<BigRational> {
        let t = self.expected_rounds();
        let u = self.solve_against(t.clone()); // u = N t
        t.iter()
            .zip(u)
            .map(|(t_k, u_k)| {
                let second = BigRational::from_integer(2.into()) * u_k - t_k.clone();
                second - t_k.clone() * t_k.clone()
            })
            .collect()
    }

    /// E(Y_k): expected total hands shown, k per round while k are live.
    pub fn y_mean(&self) -> Vec<BigRational> {
        let c = (2..=self.n).map(|k| BigRational::from_integer((k as i64).into())).collect();
        self.solve_against(c)
    }

    /// E(Y_k^2) via one-step conditioning on the next state.
    pub fn y_second_moment(&self) -> Vec<BigRational> {
        let y = self.y_mean();
        let mut c = Vec::with_capacity(self.n - 1);
        for k in 2..=self.n {
            let kf = BigRational::from_integer((k as i64).into());
            // k^2 + 2k * sum_j P(k -> j) E(Y_j), absorbed state contributing 0.
            let mut drift = BigRational::zero();
            for j in 2..=k {
                drift += self.law(k).to[j].clone() * y[j - 2].clone();
            }
            c.push(
                kf.clone() * kf.clone()
                    + BigRational::from_integer(2.into()) * kf * drift,
            );
        }
        self.solve_against(c)
    }

    pub fn y_variance(&self) -> Vec<BigRational> {
        self.y_mean()
            .into_iter()
            .zip(self.y_second_moment())
            .map(|(m, s)| s - m.clone() * m)
            .collect()
    }

    /// E(Z_k): expected conclusive rounds; a round counts when it is not a
    /// tie.
    pub fn z_mean(&self) -> Vec<BigRational> {
        let c = (2..=self.n)
            .map(|k| BigRational::one() - self.law(k).to[k].clone())
            .collect();
        self.solve_against(c)
    }

    /// P(X_n <= ell) by iterating the full-chain distribution vector from
    /// state n; state 1 is absorbing.
    pub fn round_count_cdf(&self, start: usize, max_ell: usize) -> Vec<BigRational> {
        assert!((2..=self.n).contains(&start));
        let mut dist = vec![BigRational::zero(); self.n + 1];
        dist[start] = BigRational::one();
        let mut out = Vec::with_capacity(max_ell + 1);
        out.push(dist[1].clone()); // F_0(start >= 2) = 0
        for _ in 1..=max_ell {
            let mut next = vec![BigRational::zero(); self.n + 1];
            next[1] = dist[1].clone();
            for k in 2..=self.n {
                if dist[k].is_zero() {
                    continue;
                }
                for (j, w) in self.law(k).to.iter().enumerate() {
                    if !w.is_zero() {
                        next[j] += dist[k].clone() * w.clone();
                    }
                }
            }
            dist = next;
            out.push(dist[1].clone());
        }
        out
    }
}

/// P(the support of k draws is exactly `support`) by brute enumeration,
/// independent of the engine's inclusion-exclusion.
pub fn support_prob_brute(spec: &GameSpec, support: HandSet, k: usize) -> BigRational {
    let m = spec.m;
    let mut acc = BigRational::zero();
    let mut hands = vec![0usize; k];
    loop {
        let mut weight = BigRational::one();
        let mut shown = HandSet::from_hands([]);
        for &h in &hands {
            weight *= spec.probs[h].clone();
            shown = shown | HandSet::singleton(h);
        }
        if shown == support {
            acc += weight;
        }
        let mut i = 0;
        loop {
            if i == k {
                return acc;
            }
            hands[i] += 1;
            if hands[i] < m {
                break;
            }
            hands[i] = 0;
            i += 1;
        }
    }
}

/// E(T^k) for T geometric on {1, 2, ...} with success probability q, by
/// direct series summation in floats. Independent of the Stirling-number
/// closed form used by the engine.
pub fn geometric_moment_series(q: f64, k: u32) -> f64 {
    assert!(0.0 < q && q <= 1.0);
    let mut acc = 0.0;
    let mut tail = q; // q (1-q)^(t-1)
    for t in 1..100_000u64 {
        let term = (t as f64).powi(k as i32) * tail;
        acc += term;
        tail *= 1.0 - q;
        if term < acc * 1e-17 && t > 10 {
            break;
        }
    }
    acc
}
