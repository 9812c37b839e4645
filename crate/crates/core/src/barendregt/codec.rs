//! Sequence numbers in bijective base-`B` numeration.
//!
//! `⟨x₁,…,xₖ⟩` with every `xᵢ < B` is coded by reading `x₁+1, …, xₖ+1` as
//! digits: `code = ((x₁+1)·B + (x₂+1))·B + … + (xₖ+1)`, so `⟨⟩` is 0 and
//! every natural codes exactly one sequence. For `B = 10` and entries below
//! 9 the code is the decimal string of the incremented entries, e.g.
//! `⟨3,1⟩ ↦ 42`. Appending `m` maps `s` to `s·B + m + 1`.

use super::BarendregtError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codec {
    base: u64,
}

/// A code together with the sequence it stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeqNum {
    pub code: u64,
    pub decoded: Vec<u64>,
}

impl Default for Codec {
    fn default() -> Codec {
        Codec { base: 10 }
    }
}

impl Codec {
    pub fn new(base: u64) -> Result<Codec, BarendregtError> {
        if base == 0 {
            return Err(BarendregtError::BadBase);
        }
        Ok(Codec { base })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn encode(&self, xs: &[u64]) -> Result<SeqNum, BarendregtError> {
        let mut code: u64 = 0;
        for &x in xs {
            if x >= self.base {
                return Err(BarendregtError::EntryTooLarge { entry: x, base: self.base });
            }
            code = code
                .checked_mul(self.base)
                .and_then(|c| c.checked_add(x + 1))
                .ok_or(BarendregtError::CodeOverflow)?;
        }
        Ok(SeqNum { code, decoded: xs.to_vec() })
    }

    pub fn decode(&self, code: u64) -> SeqNum {
        let mut xs = Vec::new();
        let mut c = code;
        while c > 0 {
            let d = (c - 1) % self.base;
            xs.push(d);
            c = (c - 1 - d) / self.base;
        }
        xs.reverse();
        SeqNum { code, decoded: xs }
    }

    /// The code of `s` followed by `m`.
    pub fn concat(&self, s: u64, m: u64) -> Result<u64, BarendregtError> {
        if m >= self.base {
            return Err(BarendregtError::EntryTooLarge { entry: m, base: self.base });
        }
        s.checked_mul(self.base).and_then(|c| c.checked_add(m + 1)).ok_or(BarendregtError::CodeOverflow)
    }

    /// `f̄(n)`: the code of `⟨f(0),…,f(n−1)⟩`.
    pub fn course_of_values(&self, f: impl Fn(u64) -> u64, n: u64) -> Result<SeqNum, BarendregtError> {
        let xs: Vec<u64> = (0..n).map(f).collect();
        self.encode(&xs)
    }
}

/// `a` is an initial segment of `b`.
pub fn is_prefix(a: &[u64], b: &[u64]) -> bool {
    b.starts_with(a)
}
