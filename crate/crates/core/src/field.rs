//! Small finite fields: prime fields by modular arithmetic, plus GF(4).

use crate::{Error, Result};

/// GF(4) elements are encoded as 0, 1, 2 = x, 3 = x + 1 modulo x^2 + x + 1.
const GF4_MUL: [[u32; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    order: u32,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Field {
    pub fn new(order: u32) -> Result<Self> {
        if is_prime(order) || order == 4 {
            Ok(Field { order })
        } else {
            Err(Error::UnsupportedField(order))
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.order == 4 {
            a ^ b
        } else {
            (a + b) % self.order
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.order == 4 {
            GF4_MUL[a as usize][b as usize]
        } else {
            (a * b) % self.order
        }
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Multiplicative generator found by brute force.
    pub fn primitive(&self) -> u32 {
        (1..self.order)
            .find(|&g| {
                let mut x = 1;
                let mut seen = 0;
                loop {
                    x = self.mul(x, g);
                    seen += 1;
                    if x == 1 {
                        break;
                    }
                }
                seen == self.order - 1
            })
            .unwrap_or(1)
    }
}
