//! Walks over all `3^n` restrictions of a function.
//!
//! A restriction is encoded in mixed radix 3: digit `i` is 0 or 1 when `xi+1`
//! is fixed to that value and 2 when it is free. Replacing a 2 by 0 or 1
//! always yields a smaller code, so an ascending sweep sees every
//! restriction after all of its sub-restrictions.

pub(crate) const FREE: u8 = 2;

pub(crate) fn pow3(n: usize) -> Vec<usize> {
    let mut p = Vec::with_capacity(n + 1);
    let mut v = 1usize;
    for _ in 0..=n {
        p.push(v);
        v *= 3;
    }
    p
}

/// Odometer over ternary digits with cached masks.
#[derive(Clone, Debug)]
pub(crate) struct Digits {
    pub digits: Vec<u8>,
    /// Mask of free variables.
    pub free: u32,
    /// Mask of variables fixed to 1.
    pub ones: u32,
}

impl Digits {
    pub fn zero(n: usize) -> Self {
        Self {
            digits: vec![0; n],
            free: 0,
            ones: 0,
        }
    }

    pub fn top(n: usize) -> Self {
        Self {
            digits: vec![FREE; n],
            free: crate::truth_table::full_mask(n),
            ones: 0,
        }
    }

    fn set(&mut self, i: usize, d: u8) {
        self.digits[i] = d;
        let bit = 1u32 << i;
        self.free &= !bit;
        self.ones &= !bit;
        match d {
            1 => self.ones |= bit,
            FREE => self.free |= bit,
            _ => {}
        }
    }

    pub fn increment(&mut self) {
        for i in 0..self.digits.len() {
            if self.digits[i] < FREE {
                let d = self.digits[i] + 1;
                self.set(i, d);
                return;
            }
            self.set(i, 0);
        }
    }

    pub fn decrement(&mut self) {
        for i in 0..self.digits.len() {
            if self.digits[i] > 0 {
                let d = self.digits[i] - 1;
                self.set(i, d);
                return;
            }
            self.set(i, FREE);
        }
    }
}

/// Per-restriction constancy: 0 / 1 for constant restrictions, 2 otherwise.
pub(crate) fn constancy(f: &crate::TruthTable, p3: &[usize]) -> Vec<u8> {
    let n = f.n();
    let total = p3[n];
    let mut cs = vec![0u8; total];
    let mut d = Digits::zero(n);
    for t in 0..total {
        cs[t] = if d.free == 0 {
            f.get(d.ones) as u8
        } else {
            let i = d.free.trailing_zeros() as usize;
            let a = cs[t - 2 * p3[i]];
            let b = cs[t - p3[i]];
            if a == b {
                a
            } else {
                FREE
            }
        };
        if t + 1 < total {
            d.increment();
        }
    }
    cs
}
