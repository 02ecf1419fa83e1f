use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mpnum::{BoundedValue, EvalContext};
use crate::qpoch::QBase;

/// A named parameter slot of a [`ParamSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    /// Free argument of the bilateral `1psi1` sum.
    Z,
    Lambda,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::A,
        Param::B,
        Param::C,
        Param::D,
        Param::E,
        Param::F,
        Param::G,
        Param::H,
        Param::Z,
        Param::Lambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::B => "b",
            Param::C => "c",
            Param::D => "d",
            Param::E => "e",
            Param::F => "f",
            Param::G => "g",
            Param::H => "h",
            Param::Z => "z",
            Param::Lambda => "lambda",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Param> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown parameter {s:?}")))
    }
}

/// Parameters of one identity instance. Slots not used by an identity stay
/// empty; derived slots are filled by `solve_constraints`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub base: QBase,
    values: [Option<BoundedValue>; 10],
    /// Depth of semi-finite sums (`k >= -n`); zero elsewhere.
    pub n: u32,
}

impl ParamSet {
    pub fn new(base: QBase) -> ParamSet {
        ParamSet {
            base,
            values: Default::default(),
            n: 0,
        }
    }

    pub fn with(mut self, p: Param, v: BoundedValue) -> ParamSet {
        self.set(p, v);
        self
    }

    pub fn with_n(mut self, n: u32) -> ParamSet {
        self.n = n;
        self
    }

    pub fn set(&mut self, p: Param, v: BoundedValue) {
        self.values[p.slot()] = Some(v);
    }

    pub fn clear(&mut self, p: Param) {
        self.values[p.slot()] = None;
    }

    pub fn try_get(&self, p: Param) -> Option<&BoundedValue> {
        self.values[p.slot()].as_ref()
    }

    pub fn get(&self, p: Param) -> Result<&BoundedValue> {
        self.try_get(p)
            .ok_or_else(|| Error::Config(format!("parameter `{p}` is required")))
    }

    pub fn q(&self) -> &BoundedValue {
        self.base.q()
    }

    /// The filled slots in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (Param, &BoundedValue)> {
        Param::ALL
            .into_iter()
            .filter_map(|p| self.try_get(p).map(|v| (p, v)))
    }

    /// `q`, the filled slots and `n` as decimal strings.
    pub fn to_strings(&self, digits: usize) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        out.insert("q".to_string(), self.q().to_decimal(digits));
        for (p, v) in self.entries() {
            out.insert(p.name().to_string(), v.to_decimal(digits));
        }
        out.insert("n".to_string(), self.n.to_string());
        out
    }

    /// Inverse of [`ParamSet::to_strings`]. `q` is required, `n` defaults to 0.
    pub fn from_strings(map: &BTreeMap<String, String>, ctx: &EvalContext) -> Result<ParamSet> {
        let q = map
            .get("q")
            .ok_or_else(|| Error::Config("parameter `q` is required".into()))?;
        let mut set = ParamSet::new(QBase::new(BoundedValue::parse(q, ctx.bits())?)?);
        for (k, v) in map {
            match k.as_str() {
                "q" => {}
                "n" => {
                    set.n = v
                        .trim()
                        .parse()
                        .map_err(|e| Error::Parse(format!("n = {v:?}: {e}")))?
                }
                name => set.set(name.parse()?, BoundedValue::parse(v, ctx.bits())?),
            }
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_round_trip() {
        let ctx = EvalContext::default();
        let base = QBase::from_f64(0.3, &ctx).unwrap();
        let set = ParamSet::new(base)
            .with(Param::A, BoundedValue::from_f64(0.4, ctx.bits()))
            .with(
                Param::Lambda,
                BoundedValue::from_parts(0.1, -0.7, ctx.bits()),
            )
            .with_n(5);
        let s = set.to_strings(50);
        assert_eq!(s["n"], "5");
        assert!(s["lambda"].starts_with('('));
        let back = ParamSet::from_strings(&s, &ctx).unwrap();
        assert_eq!(back.n, 5);
        for p in [Param::A, Param::Lambda] {
            let res = crate::qpoch::relative_residual(back.get(p).unwrap(), set.get(p).unwrap());
            assert!(res.to_f64() < 1e-48, "{p}: {res}");
        }
        assert!(back.try_get(Param::B).is_none());
    }

    #[test]
    fn unknown_names_are_rejected() {
        let ctx = EvalContext::default();
        let mut m = BTreeMap::new();
        m.insert("q".to_string(), "0.5".to_string());
        m.insert("mu".to_string(), "0.5".to_string());
        assert!(matches!(
            ParamSet::from_strings(&m, &ctx),
            Err(Error::Parse(_))
        ));
        m.remove("mu");
        m.remove("q");
        assert!(matches!(
            ParamSet::from_strings(&m, &ctx),
            Err(Error::Config(_))
        ));
    }
}
