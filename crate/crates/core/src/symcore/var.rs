use std::fmt;

/// A declared variable of the extended phase space.
///
/// Indices are zero-based; names are one-based (`X(0)` prints as `x1`).
/// `XDot`/`PDot` are the first-order jet coordinates standing for `dx/dt`
/// and `dp/dt`. `Path` is the auxiliary parameter used when a potential is
/// reconstructed by integrating along a ray; it never appears in parsed input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    P(usize),
    T,
    XDot(usize),
    PDot(usize),
    Path,
}

impl Var {
    pub fn is_jet(self) -> bool {
        matches!(self, Var::XDot(_) | Var::PDot(_))
    }

    pub fn is_momentum(self) -> bool {
        matches!(self, Var::P(_))
    }

    /// Inverse of `Display`; accepts only canonical spellings (`x1`, not `x01`).
    pub fn from_name(name: &str) -> Option<Var> {
        if name == "t" {
            return Some(Var::T);
        }
        let (ctor, digits): (fn(usize) -> Var, &str) = if let Some(d) = name.strip_prefix("xdot") {
            (Var::XDot, d)
        } else if let Some(d) = name.strip_prefix("pdot") {
            (Var::PDot, d)
        } else if let Some(d) = name.strip_prefix('x') {
            (Var::X, d)
        } else if let Some(d) = name.strip_prefix('p') {
            (Var::P, d)
        } else {
            return None;
        };
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let k: usize = digits.parse().ok()?;
        Some(ctor(k - 1))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::P(i) => write!(f, "p{}", i + 1),
            Var::T => f.write_str("t"),
            Var::XDot(i) => write!(f, "xdot{}", i + 1),
            Var::PDot(i) => write!(f, "pdot{}", i + 1),
            Var::Path => f.write_str("s"),
        }
    }
}

/// The elementary functions the expression language knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
