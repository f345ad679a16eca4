//! The bound rules and their compilation into directed propagators.
//!
//! | id  | rule |
//! |-----|------|
//! | R0  | aspherical X: TC(X) = TC(π), cat(X) = cat(K(π,1)) |
//! | R1  | cd(π) ≤ TC(π) ≤ 2·cd(π) |
//! | R2  | π abelian: TC(π) = cd(π) |
//! | R3  | π free nonabelian: TC(π) = 2·cd(π) |
//! | R4  | cat(K(π,1)) = cd(π) |
//! | R5  | TC(X) ≤ 2·cd(π) + dim X |
//! | R6  | TC(X) ≤ TC(π) + dim X |
//! | R7  | X = B × F: TC(X) ≤ TC(B) + TC(F) |
//! | R8  | X twisted over B with fiber F, group G: TC(X) ≤ TC(B) + TC*_G(F) |
//! | R9  | TC_G(F) ≤ TC*_G(F) |
//! | R10 | G acts freely and properly on simply connected F: TC*_G(F) ≤ dim F |
//! | R11 | X triangulated: TC(X) ≥ zero-divisor cup length of H*(X; Z/2) |
//! | R12 | for n ≤ k ≤ 2n some π has cd(π) = n, TC(π) = k (catalog fact only) |
//! | R13 | cat(X) ≤ cd(π) + ⌊dim X / 2⌋ |
//! | R14 | G acts freely on simply connected F: TC*_G(F) ≤ STC_G(F) |
//!
//! Every equality and inequality is compiled into one propagator per
//! participating quantity, so bounds flow in both directions: from
//! `y ≤ Σ t_i(x_i)` the engine derives `hi(y)` and lower bounds on each `x_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::descriptor::{EquivariantFlags, GroupClass, GroupDescriptor, SpaceDescriptor, Structure};
use super::interval::Interval;
use super::quantity::{Quantity, QuantityKind};
use super::BoundsError;
use crate::cohomology::cohomology_ring_z2;
use crate::complex::SimplicialComplex;
use crate::ring::zero_divisor_cup_length;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Assert,
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
}

impl RuleId {
    pub const DERIVATION_RULES: [RuleId; 14] = [
        RuleId::R0,
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R13,
        RuleId::R14,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Assert => "assert",
            RuleId::R0 => "R0",
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::R13 => "R13",
            RuleId::R14 => "R14",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(RuleId::Assert)
            .chain(RuleId::DERIVATION_RULES)
            .chain(std::iter::once(RuleId::R12))
            .find(|r| r.name() == s)
            .ok_or_else(|| BoundsError::UnknownRule(s.to_string()))
    }
}

/// Pairs `(cd, TC)` realized by some group with `cd = n`: every `k` in `n..=2n`.
pub fn realizable_group_bounds(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (n..=2 * n).map(move |k| (n, k))
}

/// One summand `t(x)` of an upper-bound constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    /// `c · x`
    Scaled(u64),
    /// `⌊x / 2⌋`
    Half,
}

impl Term {
    fn eval(self, x: u64) -> u64 {
        match self {
            Term::Scaled(c) => c.saturating_mul(x),
            Term::Half => x / 2,
        }
    }

    /// Least `x` with `t(x) >= r`, for `r > 0`.
    fn least_reaching(self, r: u64) -> u64 {
        match self {
            Term::Scaled(c) => r.div_ceil(c),
            Term::Half => r.saturating_mul(2),
        }
    }
}

/// How a propagator turns input intervals into a candidate interval for its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form {
    /// target = x
    Equal,
    /// target = c · x
    Scale(u64),
    /// target = x / 2, for x known to be even
    Halve,
    /// target ∈ [x, 2x]
    Between,
    /// x ∈ [target, 2·target], solved for target
    BetweenInverse,
    /// target ≤ Σ t_i(x_i)
    Upper(Vec<Term>),
    /// `y ≤ t(target) + Σ t_i(x_i)` solved for target; inputs are `y` then the `x_i`.
    SolveLower { target: Term, others: Vec<Term> },
    /// A bound computed once from descriptor data.
    Constant(Interval),
}

impl Form {
    /// Candidate interval for the target, or `None` if the inputs force it empty.
    pub fn apply(&self, inputs: &[Interval]) -> Option<Interval> {
        let x = inputs.first();
        match self {
            Form::Equal => Some(*x?),
            Form::Scale(c) => {
                let x = x?;
                Interval::new(c.saturating_mul(x.lo()), x.hi().map(|h| c.saturating_mul(h)))
            }
            Form::Halve => {
                let x = x?;
                Interval::new(x.lo().div_ceil(2), x.hi().map(|h| h / 2))
            }
            Form::Between => {
                let x = x?;
                Interval::new(x.lo(), x.hi().map(|h| h.saturating_mul(2)))
            }
            Form::BetweenInverse => {
                let x = x?;
                Interval::new(x.lo().div_ceil(2), x.hi())
            }
            Form::Upper(terms) => {
                let mut total: u64 = 0;
                for (t, x) in terms.iter().zip(inputs) {
                    match x.hi() {
                        Some(h) => total = total.saturating_add(t.eval(h)),
                        None => return Some(Interval::UNBOUNDED),
                    }
                }
                Some(Interval::at_most(total))
            }
            Form::SolveLower { target, others } => {
                let y = x?;
                let mut rest: u64 = 0;
                for (t, x) in others.iter().zip(&inputs[1..]) {
                    match x.hi() {
                        Some(h) => rest = rest.saturating_add(t.eval(h)),
                        None => return Some(Interval::UNBOUNDED),
                    }
                }
                Some(match y.lo().checked_sub(rest) {
                    Some(r) if r > 0 => Interval::at_least(target.least_reaching(r)),
                    _ => Interval::UNBOUNDED,
                })
            }
            Form::Constant(c) => Some(*c),
        }
    }
}

/// A directed use of a rule: derives a candidate for `target` from `inputs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagator {
    pub rule: RuleId,
    pub target: Quantity,
    pub inputs: Vec<Quantity>,
    pub form: Form,
    /// Declared facts the rule instance relies on, echoed in reports.
    pub assumptions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct SpaceNode {
    dim: Option<u64>,
    group: String,
    aspherical: bool,
    complex: Option<SimplicialComplex>,
    flags: Option<EquivariantFlags>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Fibration {
    total: String,
    base: String,
    fiber: String,
    /// Structure group for twisted products; `None` for plain products.
    group: Option<String>,
}

/// Flattened registry of every space and group mentioned by a descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    root: String,
    spaces: BTreeMap<String, SpaceNode>,
    groups: BTreeMap<String, GroupDescriptor>,
    fibrations: Vec<Fibration>,
}

impl Context {
    pub fn from_descriptor(descriptor: &SpaceDescriptor) -> Result<Self, BoundsError> {
        descriptor.validate()?;
        let mut ctx = Context {
            root: descriptor.name.clone(),
            spaces: BTreeMap::new(),
            groups: BTreeMap::new(),
            fibrations: Vec::new(),
        };
        ctx.register_space(descriptor)?;
        Ok(ctx)
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn space_names(&self) -> impl Iterator<Item = &str> {
        self.spaces.keys().map(String::as_str)
    }

    pub fn group_names(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn group(&self, name: &str) -> Option<&GroupDescriptor> {
        self.groups.get(name)
    }

    pub fn space_dim(&self, name: &str) -> Option<u64> {
        self.spaces.get(name).and_then(|s| s.dim)
    }

    pub fn space_group(&self, name: &str) -> Option<&str> {
        self.spaces.get(name).map(|s| s.group.as_str())
    }

    fn register_group(&mut self, group: &GroupDescriptor) -> Result<(), BoundsError> {
        match self.groups.get(&group.name) {
            Some(existing) if existing != group => Err(BoundsError::InvalidDescriptor(format!(
                "group `{}` is described twice with different data",
                group.name
            ))),
            Some(_) => Ok(()),
            None => {
                self.groups.insert(group.name.clone(), group.clone());
                Ok(())
            }
        }
    }

    fn register_space(&mut self, d: &SpaceDescriptor) -> Result<(), BoundsError> {
        self.register_group(&d.group)?;
        let node = SpaceNode {
            dim: d.effective_dim(),
            group: d.group.name.clone(),
            aspherical: d.aspherical,
            complex: d.complex.as_ref().map(|c| c.complex.clone()),
            flags: d.equivariant_flags,
        };
        match self.spaces.get(&d.name) {
            Some(existing) if existing != &node => {
                return Err(BoundsError::InvalidDescriptor(format!(
                    "space `{}` is described twice with different data",
                    d.name
                )));
            }
            Some(_) => {}
            None => {
                self.spaces.insert(d.name.clone(), node);
            }
        }
        let fibration = match &d.structure {
            None => return Ok(()),
            Some(Structure::Product { base, fiber }) => {
                self.register_space(base)?;
                self.register_space(fiber)?;
                Fibration { total: d.name.clone(), base: base.name.clone(), fiber: fiber.name.clone(), group: None }
            }
            Some(Structure::Twisted { base, fiber, group }) => {
                self.register_space(base)?;
                self.register_space(fiber)?;
                self.register_group(group)?;
                Fibration {
                    total: d.name.clone(),
                    base: base.name.clone(),
                    fiber: fiber.name.clone(),
                    group: Some(group.name.clone()),
                }
            }
        };
        if !self.fibrations.contains(&fibration) {
            self.fibrations.push(fibration);
        }
        Ok(())
    }

    fn twisted(&self) -> impl Iterator<Item = (&Fibration, &str)> {
        self.fibrations.iter().filter_map(|f| f.group.as_deref().map(|g| (f, g)))
    }

    /// Every quantity the engine tracks for this context, in key order.
    pub fn quantities(&self) -> Vec<Quantity> {
        let mut out = Vec::new();
        for name in self.spaces.keys() {
            out.push(Quantity::tc_space(name));
            out.push(Quantity::cat_space(name));
            out.push(Quantity::dim_space(name));
        }
        for name in self.groups.keys() {
            out.push(Quantity::tc_group(name));
            out.push(Quantity::cd_group(name));
            out.push(Quantity::cat_group(name));
        }
        for (f, g) in self.twisted() {
            for kind in [QuantityKind::Tcg, QuantityKind::TcgStar, QuantityKind::Stcg] {
                out.push(Quantity::equivariant(kind, &f.fiber, g));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Facts read directly off the descriptors: dimensions and cohomological dimensions.
    pub fn declared_facts(&self) -> Vec<(Quantity, Interval, String)> {
        let mut out = Vec::new();
        for (name, s) in &self.spaces {
            if let Some(d) = s.dim {
                let note = if s.complex.is_some() { "dimension of the attached complex" } else { "declared dimension" };
                out.push((Quantity::dim_space(name), Interval::exact(d), note.to_string()));
            }
        }
        for (name, g) in &self.groups {
            match (g.cd, g.class) {
                (Some(cd), _) => out.push((Quantity::cd_group(name), Interval::exact(cd), "declared cd".to_string())),
                (None, GroupClass::Trivial) => {
                    out.push((Quantity::cd_group(name), Interval::exact(0), "trivial group".to_string()))
                }
                (None, _) => {}
            }
        }
        out
    }

    /// Zero-divisor cup length of each triangulated space.
    pub fn cup_length_bounds(&self) -> BTreeMap<String, usize> {
        self.spaces
            .iter()
            .filter_map(|(name, s)| {
                s.complex.as_ref().map(|k| (name.clone(), zero_divisor_cup_length(&cohomology_ring_z2(k), None).length))
            })
            .collect()
    }

    /// All propagators in rule order R0..R14, instances in name order.
    pub fn propagators(&self) -> Vec<Propagator> {
        let mut out = Vec::new();
        let cup_lengths = self.cup_length_bounds();
        for rule in RuleId::DERIVATION_RULES {
            match rule {
                RuleId::R0 => {
                    for (x, s) in self.spaces.iter().filter(|(_, s)| s.aspherical) {
                        let a = vec![format!("aspherical({x})"), format!("pi1({x}) = {}", s.group)];
                        out.extend(equality(rule, Quantity::tc_space(x), Quantity::tc_group(&s.group), &a));
                        out.extend(equality(rule, Quantity::cat_space(x), Quantity::cat_group(&s.group), &a));
                    }
                }
                RuleId::R1 => {
                    for g in self.groups.keys() {
                        out.push(prop(rule, Quantity::tc_group(g), vec![Quantity::cd_group(g)], Form::Between, &[]));
                        out.push(prop(rule, Quantity::cd_group(g), vec![Quantity::tc_group(g)], Form::BetweenInverse, &[]));
                    }
                }
                RuleId::R2 => {
                    for (g, _) in self.groups.iter().filter(|(_, d)| d.class == GroupClass::Abelian) {
                        let a = [format!("abelian({g})")];
                        out.extend(equality(rule, Quantity::tc_group(g), Quantity::cd_group(g), &a));
                    }
                }
                RuleId::R3 => {
                    for (g, _) in self.groups.iter().filter(|(_, d)| d.class == GroupClass::FreeNonabelian) {
                        let a = [format!("free_nonabelian({g})")];
                        out.push(prop(rule, Quantity::tc_group(g), vec![Quantity::cd_group(g)], Form::Scale(2), &a));
                        out.push(prop(rule, Quantity::cd_group(g), vec![Quantity::tc_group(g)], Form::Halve, &a));
                    }
                }
                RuleId::R4 => {
                    for g in self.groups.keys() {
                        out.extend(equality(rule, Quantity::cat_group(g), Quantity::cd_group(g), &[]));
                    }
                }
                RuleId::R5 => {
                    for (x, s) in &self.spaces {
                        let a = [format!("pi1({x}) = {}", s.group)];
                        out.extend(inequality(
                            rule,
                            Quantity::tc_space(x),
                            vec![(Quantity::cd_group(&s.group), Term::Scaled(2)), (Quantity::dim_space(x), Term::Scaled(1))],
                            &a,
                        ));
                    }
                }
                RuleId::R6 => {
                    for (x, s) in &self.spaces {
                        let a = [format!("pi1({x}) = {}", s.group)];
                        out.extend(inequality(
                            rule,
                            Quantity::tc_space(x),
                            vec![(Quantity::tc_group(&s.group), Term::Scaled(1)), (Quantity::dim_space(x), Term::Scaled(1))],
                            &a,
                        ));
                    }
                }
                RuleId::R7 => {
                    for f in self.fibrations.iter().filter(|f| f.group.is_none()) {
                        let a = [format!("{} = {} x {}", f.total, f.base, f.fiber)];
                        out.extend(inequality(
                            rule,
                            Quantity::tc_space(&f.total),
                            vec![(Quantity::tc_space(&f.base), Term::Scaled(1)), (Quantity::tc_space(&f.fiber), Term::Scaled(1))],
                            &a,
                        ));
                    }
                }
                RuleId::R8 => {
                    for (f, g) in self.twisted() {
                        let a = [format!("{} twisted over {} with fiber {} and group {g}", f.total, f.base, f.fiber)];
                        out.extend(inequality(
                            rule,
                            Quantity::tc_space(&f.total),
                            vec![
                                (Quantity::tc_space(&f.base), Term::Scaled(1)),
                                (Quantity::equivariant(QuantityKind::TcgStar, &f.fiber, g), Term::Scaled(1)),
                            ],
                            &a,
                        ));
                    }
                }
                RuleId::R9 => {
                    for (f, g) in self.twisted() {
                        out.extend(inequality(
                            rule,
                            Quantity::equivariant(QuantityKind::Tcg, &f.fiber, g),
                            vec![(Quantity::equivariant(QuantityKind::TcgStar, &f.fiber, g), Term::Scaled(1))],
                            &[],
                        ));
                    }
                }
                RuleId::R10 => {
                    for (f, g) in self.twisted() {
                        let flags = self.spaces[&f.fiber].flags.unwrap_or_default();
                        if flags.free_action && flags.proper_action && flags.simply_connected_total {
                            let a = [
                                format!("freeAction({};{g})", f.fiber),
                                format!("properAction({};{g})", f.fiber),
                                format!("simplyConnected({})", f.fiber),
                            ];
                            out.extend(inequality(
                                rule,
                                Quantity::equivariant(QuantityKind::TcgStar, &f.fiber, g),
                                vec![(Quantity::dim_space(&f.fiber), Term::Scaled(1))],
                                &a,
                            ));
                        }
                    }
                }
                RuleId::R11 => {
                    for (x, &zcl) in cup_lengths.iter().filter(|(_, &z)| z > 0) {
                        let a = [format!("triangulation({x})")];
                        out.push(prop(rule, Quantity::tc_space(x), vec![], Form::Constant(Interval::at_least(zcl as u64)), &a));
                    }
                }
                RuleId::R13 => {
                    for (x, s) in &self.spaces {
                        let a = [format!("pi1({x}) = {}", s.group)];
                        out.extend(inequality(
                            rule,
                            Quantity::cat_space(x),
                            vec![(Quantity::cd_group(&s.group), Term::Scaled(1)), (Quantity::dim_space(x), Term::Half)],
                            &a,
                        ));
                    }
                }
                RuleId::R14 => {
                    for (f, g) in self.twisted() {
                        let flags = self.spaces[&f.fiber].flags.unwrap_or_default();
                        if flags.free_action && flags.simply_connected_total {
                            let a = [format!("freeAction({};{g})", f.fiber), format!("simplyConnected({})", f.fiber)];
                            out.extend(inequality(
                                rule,
                                Quantity::equivariant(QuantityKind::TcgStar, &f.fiber, g),
                                vec![(Quantity::equivariant(QuantityKind::Stcg, &f.fiber, g), Term::Scaled(1))],
                                &a,
                            ));
                        }
                    }
                }
                RuleId::Assert | RuleId::R12 => unreachable!("not a derivation rule"),
            }
        }
        out
    }
}

fn prop(rule: RuleId, target: Quantity, inputs: Vec<Quantity>, form: Form, assumptions: &[String]) -> Propagator {
    Propagator { rule, target, inputs, form, assumptions: assumptions.to_vec() }
}

fn equality(rule: RuleId, a: Quantity, b: Quantity, assumptions: &[String]) -> [Propagator; 2] {
    [
        prop(rule, a.clone(), vec![b.clone()], Form::Equal, assumptions),
        prop(rule, b, vec![a], Form::Equal, assumptions),
    ]
}

/// Propagators for `lhs ≤ Σ t_i(x_i)`: an upper bound on `lhs` and a lower
/// bound on each `x_i`.
fn inequality(rule: RuleId, lhs: Quantity, rhs: Vec<(Quantity, Term)>, assumptions: &[String]) -> Vec<Propagator> {
    let mut out = vec![prop(
        rule,
        lhs.clone(),
        rhs.iter().map(|(q, _)| q.clone()).collect(),
        Form::Upper(rhs.iter().map(|(_, t)| *t).collect()),
        assumptions,
    )];
    for (i, (q, t)) in rhs.iter().enumerate() {
        let others: Vec<&(Quantity, Term)> = rhs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| o).collect();
        let mut inputs = vec![lhs.clone()];
        inputs.extend(others.iter().map(|(oq, _)| oq.clone()));
        out.push(prop(
            rule,
            q.clone(),
            inputs,
            Form::SolveLower { target: *t, others: others.iter().map(|(_, ot)| *ot).collect() },
            assumptions,
        ));
    }
    out
}
