//! Jump-rate matrices on Z₊ and on Y, the Laguerre differential operators,
//! and the exact checks tying them to the links.

mod checks;
mod laguerre;
mod plancherel;

use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;

use crate::error::Result;
use crate::partitions::{dim, enumerate, Partition};
use crate::rational::{from_biguint, rat, require_positive, to_f64, Rat};
use crate::symfunc::ParamPair;

pub use checks::{verify_ek_bounds, verify_intertwining, EkBound, EkReport, IntertwiningReport, OneDimRates};
pub use laguerre::{
    euler_operator, laguerre_op_1d, laguerre_op_1d_split, laguerre_op_sym, laguerre_split, ExpPoly1D, ExpSymFn,
    LaguerreSplit,
};
pub use plancherel::{
    plancherel_flow_derivative, plancherel_limit_check, plancherel_limit_operator, PlancherelLimitReport,
};

/// A conservative, row-finite Q-matrix on a graded state space.
pub trait RateMatrix {
    type State: Clone + Eq + Hash + Ord + Debug;

    /// Nonzero off-diagonal entries Q(s, ·).
    fn off_diagonal(&self, s: &Self::State) -> Vec<(Self::State, Rat)>;

    /// −Q(s, s).
    fn exit_rate(&self, s: &Self::State) -> Rat;

    /// Grading used for truncation windows (|λ| or l).
    fn grade(&self, s: &Self::State) -> usize;

    fn states_of_grade(&self, n: usize) -> Vec<Self::State>;

    /// The two-parameter birth–death chain the grade process follows.
    fn grade_rates(&self) -> OneDimRates;

    fn off_diagonal_f64(&self, s: &Self::State) -> Vec<(Self::State, f64)> {
        self.off_diagonal(s).into_iter().map(|(t, q)| (t, to_f64(&q))).collect()
    }

    fn states_up_to(&self, n: usize) -> Vec<Self::State> {
        (0..=n).flat_map(|k| self.states_of_grade(k)).collect()
    }
}

/// The birth–death chain on Z₊ with Q(k,k+1) = r(c+k), Q(k,k−1) = (r+1)k.
#[derive(Clone, Debug, PartialEq)]
pub struct Meixner1D {
    pub c: Rat,
    pub r: Rat,
}

impl Meixner1D {
    pub fn new(c: Rat, r: Rat) -> Result<Self> {
        require_positive("c", &c)?;
        require_positive("r", &r)?;
        Ok(Meixner1D { c, r })
    }
}

impl RateMatrix for Meixner1D {
    type State = usize;

    fn off_diagonal(&self, &k: &usize) -> Vec<(usize, Rat)> {
        let kr = rat(k as i64);
        let mut row = vec![(k + 1, &self.r * (&self.c + &kr))];
        if k > 0 {
            row.push((k - 1, (&self.r + rat(1)) * kr));
        }
        row
    }

    fn exit_rate(&self, &k: &usize) -> Rat {
        (rat(2) * &self.r + rat(1)) * rat(k as i64) + &self.r * &self.c
    }

    fn grade(&self, &k: &usize) -> usize {
        k
    }

    fn states_of_grade(&self, n: usize) -> Vec<usize> {
        vec![n]
    }

    fn grade_rates(&self) -> OneDimRates {
        OneDimRates { a: &self.r * &self.c, b: self.r.clone(), d: &self.r + rat(1) }
    }
}

fn up_fraction(lambda: &Partition, bigger: &Partition) -> Rat {
    from_biguint(&dim(bigger)) / (rat(lambda.size() as i64 + 1) * from_biguint(&dim(lambda)))
}

fn down_fraction(lambda: &Partition, smaller: &Partition) -> Rat {
    rat(lambda.size() as i64) * from_biguint(&dim(smaller)) / from_biguint(&dim(lambda))
}

/// The z-measure chain on Y with parameters (σ₁, σ₂) and r.
#[derive(Clone, Debug, PartialEq)]
pub struct ZMeasureRates {
    pub sigma: ParamPair,
    pub r: Rat,
}

impl ZMeasureRates {
    pub fn new(sigma: ParamPair, r: Rat) -> Result<Self> {
        require_positive("r", &r)?;
        Ok(ZMeasureRates { sigma, r })
    }
}

impl RateMatrix for ZMeasureRates {
    type State = Partition;

    fn off_diagonal(&self, lambda: &Partition) -> Vec<(Partition, Rat)> {
        let mut row = Vec::new();
        for ((i, j), up) in lambda.up_cells() {
            let c = j as i64 - i as i64;
            let q = &self.r * self.sigma.weight(c) * up_fraction(lambda, &up);
            row.push((up, q));
        }
        let down_rate = &self.r + rat(1);
        for (_, down) in lambda.down_cells() {
            let q = &down_rate * down_fraction(lambda, &down);
            row.push((down, q));
        }
        row
    }

    fn exit_rate(&self, lambda: &Partition) -> Rat {
        (rat(2) * &self.r + rat(1)) * rat(lambda.size() as i64) + &self.r * self.sigma.sigma2()
    }

    fn grade(&self, lambda: &Partition) -> usize {
        lambda.size()
    }

    fn states_of_grade(&self, n: usize) -> Vec<Partition> {
        enumerate(n)
    }

    fn grade_rates(&self) -> OneDimRates {
        OneDimRates { a: &self.r * self.sigma.sigma2(), b: self.r.clone(), d: &self.r + rat(1) }
    }
}

/// The Plancherel chain on Y with parameter θ.
#[derive(Clone, Debug, PartialEq)]
pub struct PlancherelRates {
    pub theta: Rat,
}

impl PlancherelRates {
    pub fn new(theta: Rat) -> Result<Self> {
        require_positive("theta", &theta)?;
        Ok(PlancherelRates { theta })
    }
}

impl RateMatrix for PlancherelRates {
    type State = Partition;

    fn off_diagonal(&self, lambda: &Partition) -> Vec<(Partition, Rat)> {
        let mut row: Vec<(Partition, Rat)> = lambda
            .up_set()
            .into_iter()
            .map(|up| {
                let q = &self.theta * up_fraction(lambda, &up);
                (up, q)
            })
            .collect();
        for down in lambda.down_set() {
            let q = down_fraction(lambda, &down);
            row.push((down, q));
        }
        row
    }

    fn exit_rate(&self, lambda: &Partition) -> Rat {
        rat(lambda.size() as i64) + &self.theta
    }

    fn grade(&self, lambda: &Partition) -> usize {
        lambda.size()
    }

    fn states_of_grade(&self, n: usize) -> Vec<Partition> {
        enumerate(n)
    }

    fn grade_rates(&self) -> OneDimRates {
        OneDimRates { a: self.theta.clone(), b: Rat::zero(), d: rat(1) }
    }
}

/// A parameterized generator family.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Meixner1D(Meixner1D),
    ZMeasure(ZMeasureRates),
    Plancherel(PlancherelRates),
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Meixner1D(_) => "meixner1d",
            GeneratorSpec::ZMeasure(_) => "zmeasure",
            GeneratorSpec::Plancherel(_) => "plancherel",
        }
    }
}

/// A full row of Q: off-diagonal entries and the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct QRow<S> {
    pub off_diagonal: Vec<(S, Rat)>,
    pub diagonal: Rat,
}

impl<S> QRow<S> {
    pub fn row_sum(&self) -> Rat {
        self.off_diagonal.iter().map(|(_, q)| q).sum::<Rat>() + &self.diagonal
    }
}

pub fn q_row<G: RateMatrix>(g: &G, s: &G::State) -> QRow<G::State> {
    QRow { off_diagonal: g.off_diagonal(s), diagonal: -g.exit_rate(s) }
}

/// (QF)(s) = Σ_κ Q(s, κ) F(κ).
pub fn apply_q<G: RateMatrix>(g: &G, f: impl Fn(&G::State) -> Rat, s: &G::State) -> Rat {
    let off: Rat = g.off_diagonal(s).iter().map(|(t, q)| q * f(t)).sum();
    off - g.exit_rate(s) * f(s)
}
