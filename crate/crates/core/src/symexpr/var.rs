//! Polynomial ring variables.
//!
//! A `Var` is a small integer whose numeric order is the monomial order:
//! `n < a < b < c < d < e < mu < eps0 < (other parameters) < U(0) < U(1) < ...`.
//! Parameters outside the fixed list are interned in a process-wide table.

use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

const U_BASE: u32 = 1 << 20;
const KNOWN: [&str; 7] = ["a", "b", "c", "d", "e", "mu", "eps0"];
/// Names the library itself introduces, interned first so their relative
/// order never depends on call order.
const PRESEEDED: [&str; 8] = ["u0", "u1", "v", "v0", "s", "t", "k", "x"];

static INTERNED: Lazy<RwLock<Vec<String>>> =
    Lazy::new(|| RwLock::new(PRESEEDED.iter().map(|s| s.to_string()).collect()));

impl Var {
    pub const N: Var = Var(0);

    pub fn u(k: u32) -> Var {
        Var(U_BASE + k)
    }

    pub fn param(name: &str) -> Var {
        if let Some(i) = KNOWN.iter().position(|&k| k == name) {
            return Var(1 + i as u32);
        }
        {
            let table = INTERNED.read().expect("interner poisoned");
            if let Some(i) = table.iter().position(|s| s == name) {
                return Var(8 + i as u32);
            }
        }
        let mut table = INTERNED.write().expect("interner poisoned");
        if let Some(i) = table.iter().position(|s| s == name) {
            return Var(8 + i as u32);
        }
        table.push(name.to_string());
        Var(8 + (table.len() - 1) as u32)
    }

    pub fn is_n(self) -> bool {
        self.0 == 0
    }

    pub fn is_u(self) -> bool {
        self.0 >= U_BASE
    }

    pub fn is_param(self) -> bool {
        self.0 > 0 && self.0 < U_BASE
    }

    pub fn u_index(self) -> Option<u32> {
        self.is_u().then(|| self.0 - U_BASE)
    }

    pub fn name(self) -> String {
        if self.is_n() {
            "n".to_string()
        } else if let Some(k) = self.u_index() {
            format!("u({k})")
        } else if self.0 <= 7 {
            KNOWN[(self.0 - 1) as usize].to_string()
        } else {
            INTERNED.read().expect("interner poisoned")[(self.0 - 8) as usize].clone()
        }
    }

    /// Shift `U(k)` to `U(k+i)`; other variables are unchanged.
    pub fn shifted(self, i: u32) -> Var {
        if self.is_u() {
            Var(self.0 + i)
        } else {
            self
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matches_declared_ranking() {
        let order = [
            Var::N,
            Var::param("a"),
            Var::param("b"),
            Var::param("c"),
            Var::param("d"),
            Var::param("e"),
            Var::param("mu"),
            Var::param("eps0"),
            Var::param("zeta_custom"),
            Var::u(0),
            Var::u(1),
            Var::u(2),
        ];
        for w in order.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn names_roundtrip() {
        for name in ["n", "a", "eps0", "u(3)", "qq"] {
            let v = if name == "n" {
                Var::N
            } else if name == "u(3)" {
                Var::u(3)
            } else {
                Var::param(name)
            };
            assert_eq!(v.name(), name);
        }
    }
}
