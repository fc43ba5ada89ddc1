//! Interned variable names.
//!
//! Every symbol that can appear in a polynomial (the summation variable,
//! the recurrence variable, physical parameters, free constants) is mapped
//! to a small integer index. The index doubles as the variable's rank in the
//! global monomial order, so the first names registered are the most
//! significant ones. The reserved names below are registered up front in a
//! fixed order; anything else is appended on first use.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

/// Maximum number of distinct variables a process may register.
pub const MAX_VARS: usize = 24;

const RESERVED: [&str; 10] = ["k", "p", "n", "nu", "eps", "a", "kappa", "mu", "beta", "j"];

struct Registry {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u8>,
}

static REGISTRY: LazyLock<RwLock<Registry>> = LazyLock::new(|| {
    let mut reg = Registry {
        names: Vec::new(),
        index: HashMap::new(),
    };
    for name in RESERVED {
        let id = reg.names.len() as u8;
        reg.names.push(name);
        reg.index.insert(name, id);
    }
    RwLock::new(reg)
});

/// A symbol in the global variable table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub const K: Var = Var(0);
    pub const P: Var = Var(1);
    pub const N: Var = Var(2);
    pub const NU: Var = Var(3);
    pub const EPS: Var = Var(4);
    pub const A: Var = Var(5);
    pub const KAPPA: Var = Var(6);
    pub const MU: Var = Var(7);
    pub const BETA: Var = Var(8);
    pub const J: Var = Var(9);

    /// Look up or register `name`.
    ///
    /// Panics if the table already holds [`MAX_VARS`] names.
    pub fn new(name: &str) -> Var {
        if let Some(&id) = REGISTRY.read().unwrap().index.get(name) {
            return Var(id);
        }
        let mut reg = REGISTRY.write().unwrap();
        if let Some(&id) = reg.index.get(name) {
            return Var(id);
        }
        assert!(
            reg.names.len() < MAX_VARS,
            "variable table full ({MAX_VARS} names); cannot register `{name}`"
        );
        let id = reg.names.len() as u8;
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        reg.names.push(leaked);
        reg.index.insert(leaked, id);
        Var(id)
    }

    /// Look up `name` without registering it.
    pub fn lookup(name: &str) -> Option<Var> {
        REGISTRY.read().unwrap().index.get(name).map(|&id| Var(id))
    }

    pub fn name(self) -> &'static str {
        REGISTRY.read().unwrap().names[self.0 as usize]
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Var {
        Var(i as u8)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
