//! Named test functions and the block-ball family.
//!
//! Registry names: `dictator`, `majority`, `parity`, `tribes`,
//! `and-indicator` (each optionally suffixed `:n` for the dimension),
//! `block-ball:m` and `mixed:n`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use crate::fourier::{BooleanFunction, RangeTag};
#[allow(unused_imports)] // std float methods shadow it when std is linked
use crate::mathx::Float;
use crate::{Error, Result, MAX_DIM};

/// Dimension used when a registry name carries no `:n` suffix.
pub const DEFAULT_DIM: usize = 5;

/// Partition of `0..m*m` into `m` consecutive blocks of size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    m: usize,
}

impl BlockSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("block count must be positive".into()));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    /// `J_i`, 0-based.
    pub fn block(&self, i: usize) -> Range<usize> {
        i * self.m..(i + 1) * self.m
    }

    pub fn block_of(&self, j: usize) -> usize {
        j / self.m
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.m).map(|i| self.block(i))
    }
}

/// A parsed registry name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Dictator(usize),
    Majority(usize),
    Parity(usize),
    Tribes(usize),
    AndIndicator(usize),
    /// Parameter is the block count `m`; dimension `m^2`.
    BlockBall(usize),
    Mixed(usize),
}

impl Builtin {
    pub fn build(&self) -> Result<BooleanFunction> {
        match *self {
            Builtin::Dictator(n) => dictator(n),
            Builtin::Majority(n) => majority(n),
            Builtin::Parity(n) => parity(n),
            Builtin::Tribes(n) => tribes(n),
            Builtin::AndIndicator(n) => and_indicator(n),
            Builtin::BlockBall(m) => block_ball(m),
            Builtin::Mixed(n) => mixed_example(n),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Builtin::BlockBall(m) => m * m,
            Builtin::Dictator(n)
            | Builtin::Majority(n)
            | Builtin::Parity(n)
            | Builtin::Tribes(n)
            | Builtin::AndIndicator(n)
            | Builtin::Mixed(n) => n,
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Dictator(n) => write!(f, "dictator:{n}"),
            Builtin::Majority(n) => write!(f, "majority:{n}"),
            Builtin::Parity(n) => write!(f, "parity:{n}"),
            Builtin::Tribes(n) => write!(f, "tribes:{n}"),
            Builtin::AndIndicator(n) => write!(f, "and-indicator:{n}"),
            Builtin::BlockBall(m) => write!(f, "block-ball:{m}"),
            Builtin::Mixed(n) => write!(f, "mixed:{n}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => {
                let v = arg
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad parameter in {s:?}")))?;
                (name, Some(v))
            }
            None => (s, None),
        };
        let n = arg.unwrap_or(DEFAULT_DIM);
        Ok(match name {
            "dictator" => Builtin::Dictator(n),
            "majority" => Builtin::Majority(n),
            "parity" => Builtin::Parity(n),
            "tribes" => Builtin::Tribes(n),
            "and-indicator" => Builtin::AndIndicator(n),
            "block-ball" => Builtin::BlockBall(arg.ok_or_else(|| Error::Parse("block-ball needs :m".into()))?),
            "mixed" => Builtin::Mixed(arg.ok_or_else(|| Error::Parse("mixed needs :n".into()))?),
            _ => return Err(Error::UnknownName(name.to_string())),
        })
    }
}

/// Looks up `name` (without a `:` suffix) at dimension `n`. For `block-ball`
/// the parameter is the block count.
pub fn builtin(name: &str, n: usize) -> Result<BooleanFunction> {
    if name.contains(':') {
        return Err(Error::Parse(format!("pass the dimension separately, got {name:?}")));
    }
    format!("{name}:{n}").parse::<Builtin>()?.build()
}

fn signed(n: usize, g: impl FnMut(&[i8]) -> f64) -> Result<BooleanFunction> {
    if n == 0 {
        return Err(Error::Dimension(n));
    }
    BooleanFunction::from_point_fn(n, RangeTag::Signed, g)
}

fn sign(v: bool) -> f64 {
    if v {
        1.0
    } else {
        -1.0
    }
}

/// `x_1`.
pub fn dictator(n: usize) -> Result<BooleanFunction> {
    signed(n, |x| f64::from(x[0]))
}

/// `sign(x_1 + ... + x_n)`, odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    if n.is_multiple_of(2) {
        return Err(Error::Parameter(format!("majority needs odd n, got {n}")));
    }
    signed(n, |x| sign(x.iter().map(|&v| i32::from(v)).sum::<i32>() > 0))
}

/// `prod_i x_i`.
pub fn parity(n: usize) -> Result<BooleanFunction> {
    signed(n, |x| x.iter().map(|&v| f64::from(v)).product())
}

/// Width `ceil(log2 n - log2 ln n)`, clamped to `1..=n`.
pub fn tribes_width(n: usize) -> usize {
    if n <= 2 {
        return n.max(1);
    }
    let nf = n as f64;
    let w = (nf.log2() - nf.ln().log2()).ceil();
    (w as usize).clamp(1, n)
}

/// `-1` iff some tribe (consecutive block of [`tribes_width`] coordinates,
/// the last one possibly shorter) is all `-1`.
pub fn tribes(n: usize) -> Result<BooleanFunction> {
    let w = tribes_width(n);
    signed(n, |x| sign(!x.chunks(w).any(|tribe| tribe.iter().all(|&v| v == -1))))
}

/// Indicator of the single point `(-1, ..., -1)`.
pub fn and_indicator(n: usize) -> Result<BooleanFunction> {
    if n == 0 {
        return Err(Error::Dimension(n));
    }
    let all = (1usize << n) - 1;
    BooleanFunction::indicator(n, |idx| idx == all)
}

/// Indicator of `{x : sum_i (m^{-1/2} sum_{j in J_i} x_j)^2 <= m}` on
/// `n = m^2` coordinates, evaluated as the integer test
/// `sum_i (sum_{j in J_i} x_j)^2 <= m^2`.
pub fn block_ball(m: usize) -> Result<BooleanFunction> {
    let spec = BlockSpec::new(m)?;
    let n = spec.n();
    if n > MAX_DIM {
        return Err(Error::Dimension(n));
    }
    let limit = (m * m) as i64;
    let table = BooleanFunction::from_point_fn(n, RangeTag::Indicator, |x| {
        let q: i64 = spec
            .blocks()
            .map(|r| {
                let s: i64 = x[r].iter().map(|&v| i64::from(v)).sum();
                s * s
            })
            .sum();
        if q <= limit {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(table)
}

/// `x_2` when `x_1 = 1`, `prod_{i >= 3} x_i` when `x_1 = -1`.
pub fn mixed_example(n: usize) -> Result<BooleanFunction> {
    if n < 3 {
        return Err(Error::Parameter(format!("mixed example needs n >= 3, got {n}")));
    }
    signed(n, |x| {
        if x[0] == 1 {
            f64::from(x[1])
        } else {
            x[2..].iter().map(|&v| f64::from(v)).product()
        }
    })
}

/// Every registry function of dimension at most `max_n`, keyed by name.
pub fn standard_corpus(max_n: usize) -> Vec<(String, BooleanFunction)> {
    let mut out: Vec<Builtin> = Vec::new();
    for n in 1..=max_n {
        out.extend([Builtin::Dictator(n), Builtin::Parity(n), Builtin::Tribes(n), Builtin::AndIndicator(n)]);
        if n % 2 == 1 {
            out.push(Builtin::Majority(n));
        }
        if n >= 3 {
            out.push(Builtin::Mixed(n));
        }
    }
    for m in 1..=4 {
        if m * m <= max_n {
            out.push(Builtin::BlockBall(m));
        }
    }
    out.into_iter()
        .map(|b| (b.to_string(), b.build().expect("registry parameters are valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{decode, wht};

    #[test]
    fn parse_names() {
        assert_eq!("majority:7".parse::<Builtin>().unwrap(), Builtin::Majority(7));
        assert_eq!("parity".parse::<Builtin>().unwrap(), Builtin::Parity(DEFAULT_DIM));
        assert_eq!("block-ball:3".parse::<Builtin>().unwrap().n(), 9);
        assert!(matches!("block-ball".parse::<Builtin>(), Err(Error::Parse(_))));
        assert!(matches!("nope:3".parse::<Builtin>(), Err(Error::UnknownName(_))));
        for b in [Builtin::Tribes(6), Builtin::Mixed(4), Builtin::AndIndicator(2)] {
            assert_eq!(b.to_string().parse::<Builtin>().unwrap(), b);
        }
    }

    #[test]
    fn dictator_and_parity() {
        let d = builtin("dictator", 3).unwrap();
        for idx in 0..8 {
            assert_eq!(d.at(idx), f64::from(decode(idx, 3)[0]));
        }
        let p = builtin("parity", 4).unwrap();
        let spec = wht(&p);
        assert_eq!(spec.coeff(0b1111), 1.0);
        assert!((spec.total_weight() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn majority_three() {
        let f = majority(3).unwrap();
        let spec = wht(&f);
        for i in 0..3 {
            assert!((spec.singleton(i) - 0.5).abs() < 1e-15);
        }
        assert!((spec.coeff(0b111) + 0.5).abs() < 1e-15);
        assert!(majority(4).is_err());
    }

    #[test]
    fn block_ball_fixtures() {
        let one = block_ball(1).unwrap();
        assert!(one.values().iter().all(|&v| v == 1.0));
        let two = block_ball(2).unwrap();
        assert_eq!(two.at(0), 0.0);
        // sums per block are in {-2,0,2}; excluded iff both blocks are ±2
        assert!((two.mean() - 0.75).abs() < 1e-15);
        assert!(block_ball(5).is_err());
        assert!(block_ball(0).is_err());
    }

    #[test]
    fn mixed_branches() {
        let f = mixed_example(5).unwrap();
        for idx in 0..32 {
            let x = decode(idx, 5);
            let expect = if x[0] == 1 {
                f64::from(x[1])
            } else {
                f64::from(x[2] * x[3] * x[4])
            };
            assert_eq!(f.at(idx), expect);
        }
        assert!(mixed_example(2).is_err());
    }

    #[test]
    fn tribes_widths() {
        assert_eq!(tribes_width(1), 1);
        assert_eq!(tribes_width(2), 2);
        assert_eq!(tribes_width(8), 2);
        assert_eq!(tribes_width(16), 3);
        let t = tribes(4).unwrap();
        assert_eq!(t.at(0), 1.0);
        assert_eq!(t.at(0b1111), -1.0);
    }

    #[test]
    fn corpus_is_valid() {
        let c = standard_corpus(6);
        assert!(c.iter().any(|(name, _)| name == "block-ball:2"));
        assert!(c.iter().all(|(_, f)| f.n() <= 6));
    }
}
