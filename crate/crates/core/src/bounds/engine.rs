use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::descriptor::SpaceDescriptor;
use super::interval::Interval;
use super::quantity::Quantity;
use super::rules::{Context, Propagator, RuleId};
use super::BoundsError;

/// Propagation passes allowed before giving up on reaching a fixpoint.
const MAX_PASSES: usize = 100_000;

/// One derivation: `rule` applied to `inputs` produced `candidate` for `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: RuleId,
    pub inputs: Vec<(Quantity, Interval)>,
    pub target: Quantity,
    pub candidate: Interval,
    /// Whether the candidate narrowed the target when it was derived.
    pub tightened: bool,
    pub note: Option<String>,
}

impl TraceEntry {
    fn describe(&self, index: usize) -> String {
        if self.rule == RuleId::Assert {
            let note = self.note.as_deref().unwrap_or("assertion");
            return format!("trace #{index}: {note}");
        }
        let inputs: Vec<String> = self.inputs.iter().map(|(q, i)| format!("{q} = {i}")).collect();
        if inputs.is_empty() {
            format!("trace #{index}: {}", self.rule)
        } else {
            format!("trace #{index}: {} from {}", self.rule, inputs.join(", "))
        }
    }
}

/// Current intervals for every quantity of a context, with the derivation trace.
#[derive(Clone, Debug)]
pub struct FactBase {
    context: Context,
    propagators: Vec<Propagator>,
    facts: BTreeMap<Quantity, Interval>,
    trace: Vec<TraceEntry>,
    lo_source: BTreeMap<Quantity, usize>,
    hi_source: BTreeMap<Quantity, usize>,
    recorded: HashSet<(RuleId, Quantity, Vec<Quantity>, Interval)>,
    assumptions: BTreeSet<String>,
}

impl FactBase {
    /// A fact base with every quantity unbounded and no facts asserted.
    pub fn new(context: Context) -> Self {
        let propagators = context.propagators();
        let facts = context.quantities().into_iter().map(|q| (q, Interval::UNBOUNDED)).collect();
        FactBase {
            context,
            propagators,
            facts,
            trace: Vec::new(),
            lo_source: BTreeMap::new(),
            hi_source: BTreeMap::new(),
            recorded: HashSet::new(),
            assumptions: BTreeSet::new(),
        }
    }

    /// A fact base seeded with the dimensions and cds declared by `descriptor`.
    pub fn for_descriptor(descriptor: &SpaceDescriptor) -> Result<Self, BoundsError> {
        let mut base = FactBase::new(Context::from_descriptor(descriptor)?);
        for (q, interval, note) in base.context.declared_facts() {
            base.assert_fact(&q, interval, &note)?;
        }
        Ok(base)
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn propagators(&self) -> &[Propagator] {
        &self.propagators
    }

    pub fn facts(&self) -> &BTreeMap<Quantity, Interval> {
        &self.facts
    }

    pub fn get(&self, q: &Quantity) -> Option<Interval> {
        self.facts.get(q).copied()
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    /// Mutable access to the trace, for exercising [`FactBase::check_consistency`].
    pub fn trace_mut(&mut self) -> &mut Vec<TraceEntry> {
        &mut self.trace
    }

    pub fn assumptions(&self) -> &BTreeSet<String> {
        &self.assumptions
    }

    /// Intersects `q` with an externally supplied interval.
    pub fn assert_fact(&mut self, q: &Quantity, interval: Interval, note: &str) -> Result<bool, BoundsError> {
        if !self.facts.contains_key(q) {
            return Err(BoundsError::UnknownQuantity(q.to_string()));
        }
        self.apply(RuleId::Assert, q, Vec::new(), Some(interval), Some(note.to_string()), &[])
    }

    /// Runs every propagator in order until nothing changes; returns the number of passes.
    pub fn propagate(&mut self) -> Result<usize, BoundsError> {
        self.propagate_with(None, &[])
    }

    /// Like [`FactBase::propagate`] with a custom schedule of propagator
    /// indices and a set of rules to skip.
    pub fn propagate_with(&mut self, order: Option<&[usize]>, disabled: &[RuleId]) -> Result<usize, BoundsError> {
        let schedule: Vec<usize> = match order {
            Some(o) => o.to_vec(),
            None => (0..self.propagators.len()).collect(),
        };
        for pass in 1..=MAX_PASSES {
            let mut changed = false;
            for &i in &schedule {
                let p = self.propagators[i].clone();
                if disabled.contains(&p.rule) {
                    continue;
                }
                let inputs: Vec<(Quantity, Interval)> = p.inputs.iter().map(|q| (q.clone(), self.facts[q])).collect();
                let values: Vec<Interval> = inputs.iter().map(|(_, i)| *i).collect();
                let candidate = p.form.apply(&values);
                changed |= self.apply(p.rule, &p.target, inputs, candidate, None, &p.assumptions)?;
            }
            if !changed {
                return Ok(pass);
            }
        }
        Err(BoundsError::NoFixpoint(MAX_PASSES))
    }

    fn source(&self, index: Option<&usize>) -> String {
        match index {
            Some(&i) => self.trace[i].describe(i),
            None => "default".to_string(),
        }
    }

    fn apply(
        &mut self,
        rule: RuleId,
        target: &Quantity,
        inputs: Vec<(Quantity, Interval)>,
        candidate: Option<Interval>,
        note: Option<String>,
        assumptions: &[String],
    ) -> Result<bool, BoundsError> {
        let current = self.facts[target];
        let entry = |candidate: Interval, tightened: bool, inputs: Vec<(Quantity, Interval)>| TraceEntry {
            rule,
            inputs,
            target: target.clone(),
            candidate,
            tightened,
            note: note.clone(),
        };
        let Some(candidate) = candidate else {
            let here = entry(Interval::UNBOUNDED, false, inputs).describe(self.trace.len());
            return Err(BoundsError::Inconsistency {
                quantity: target.to_string(),
                lo: current.lo(),
                hi: current.hi().unwrap_or(current.lo()),
                lo_source: here.clone(),
                hi_source: here,
            });
        };
        let Some(next) = current.intersect(&candidate) else {
            let here = entry(candidate, false, inputs).describe(self.trace.len());
            let err = if current.hi().is_some_and(|h| candidate.lo() > h) {
                BoundsError::Inconsistency {
                    quantity: target.to_string(),
                    lo: candidate.lo(),
                    hi: current.hi().unwrap_or_default(),
                    lo_source: here,
                    hi_source: self.source(self.hi_source.get(target)),
                }
            } else {
                BoundsError::Inconsistency {
                    quantity: target.to_string(),
                    lo: current.lo(),
                    hi: candidate.hi().unwrap_or_default(),
                    lo_source: self.source(self.lo_source.get(target)),
                    hi_source: here,
                }
            };
            return Err(err);
        };
        let tightened = next != current;
        if !tightened && rule != RuleId::Assert {
            let attains =
                (candidate.lo() > 0 && candidate.lo() == next.lo()) || (candidate.hi().is_some() && candidate.hi() == next.hi());
            let key = (rule, target.clone(), inputs.iter().map(|(q, _)| q.clone()).collect::<Vec<_>>(), candidate);
            if !attains || self.recorded.contains(&key) {
                return Ok(false);
            }
        }
        self.recorded.insert((rule, target.clone(), inputs.iter().map(|(q, _)| q.clone()).collect(), candidate));
        let index = self.trace.len();
        self.trace.push(entry(candidate, tightened, inputs));
        if next.lo() != current.lo() {
            self.lo_source.insert(target.clone(), index);
        }
        if next.hi() != current.hi() {
            self.hi_source.insert(target.clone(), index);
        }
        self.assumptions.extend(assumptions.iter().cloned());
        self.facts.insert(target.clone(), next);
        Ok(tightened)
    }

    /// Replays the trace against freshly compiled rules and checks that every
    /// final interval is exactly what the recorded derivations justify.
    pub fn check_consistency(&self) -> Result<(), BoundsError> {
        let propagators = self.context.propagators();
        for (index, e) in self.trace.iter().enumerate() {
            let replay = |reason: String| BoundsError::Replay { index, reason };
            if e.rule == RuleId::Assert {
                if !e.inputs.is_empty() {
                    return Err(replay("assertions take no inputs".to_string()));
                }
                continue;
            }
            let keys: Vec<&Quantity> = e.inputs.iter().map(|(q, _)| q).collect();
            let matching: Vec<&Propagator> = propagators
                .iter()
                .filter(|p| p.rule == e.rule && p.target == e.target && p.inputs.iter().eq(keys.iter().copied()))
                .collect();
            if matching.is_empty() {
                return Err(replay(format!("{} does not derive {} from those inputs", e.rule, e.target)));
            }
            let values: Vec<Interval> = e.inputs.iter().map(|(_, i)| *i).collect();
            if !matching.iter().any(|p| p.form.apply(&values) == Some(e.candidate)) {
                return Err(replay(format!("recomputing {} for {} does not give {}", e.rule, e.target, e.candidate)));
            }
            for (q, recorded) in &e.inputs {
                let Some(fact) = self.facts.get(q) else {
                    return Err(replay(format!("unknown input {q}")));
                };
                if !recorded.contains(fact) {
                    return Err(replay(format!("final {q} = {fact} lies outside the recorded input {recorded}")));
                }
            }
        }
        check_facts_against_trace(&self.facts, &self.trace)
    }

    pub fn report(&self) -> Report {
        Report {
            facts: self.facts.clone(),
            trace: self.trace.clone(),
            assumptions: self.assumptions.iter().cloned().collect(),
        }
    }
}

/// Checks that each fact equals the intersection of the candidates recorded for it.
fn check_facts_against_trace(facts: &BTreeMap<Quantity, Interval>, trace: &[TraceEntry]) -> Result<(), BoundsError> {
    let mut justified: BTreeMap<&Quantity, Interval> = BTreeMap::new();
    for (index, e) in trace.iter().enumerate() {
        let current = justified.entry(&e.target).or_default();
        *current = current.intersect(&e.candidate).ok_or_else(|| BoundsError::Replay {
            index,
            reason: format!("candidate {} for {} is disjoint from earlier derivations", e.candidate, e.target),
        })?;
    }
    for (q, fact) in facts {
        let expected = justified.get(q).copied().unwrap_or_default();
        if expected != *fact {
            return Err(BoundsError::Replay {
                index: trace.len(),
                reason: format!("{q} = {fact} but the trace justifies {expected}"),
            });
        }
    }
    Ok(())
}

/// The outcome of running the engine on one descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub facts: BTreeMap<Quantity, Interval>,
    pub trace: Vec<TraceEntry>,
    pub assumptions: Vec<String>,
}

impl Report {
    pub fn get(&self, q: &Quantity) -> Option<Interval> {
        self.facts.get(q).copied()
    }

    pub fn tc(&self, space: &str) -> Option<Interval> {
        self.get(&Quantity::tc_space(space))
    }

    /// Derivations of `target` by `rule`.
    pub fn entries<'a>(&'a self, rule: RuleId, target: &'a Quantity) -> impl Iterator<Item = &'a TraceEntry> + 'a {
        self.trace.iter().filter(move |e| e.rule == rule && &e.target == target)
    }

    /// Checks the report without access to the rules: every fact must be the
    /// intersection of its recorded candidates.
    pub fn check_self_consistent(&self) -> Result<(), BoundsError> {
        check_facts_against_trace(&self.facts, &self.trace)
    }
}

/// Propagates the declared facts of `descriptor` to a fixpoint.
pub fn bounds_for(descriptor: &SpaceDescriptor) -> Result<Report, BoundsError> {
    bounds_with(descriptor, &[])
}

/// Like [`bounds_for`] with extra asserted intervals.
pub fn bounds_with(descriptor: &SpaceDescriptor, extra: &[(Quantity, Interval)]) -> Result<Report, BoundsError> {
    let mut base = FactBase::for_descriptor(descriptor)?;
    for (q, interval) in extra {
        base.assert_fact(q, *interval, "user assertion")?;
    }
    base.propagate()?;
    Ok(base.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::descriptor::{EquivariantFlags, GroupClass, GroupDescriptor, Structure};
    use crate::bounds::quantity::QuantityKind;
    use crate::complex::fixtures;

    fn torus() -> SpaceDescriptor {
        SpaceDescriptor::new("torus7", GroupDescriptor::free_abelian(2))
            .aspherical()
            .with_complex(fixtures::torus7(), None)
    }

    fn circle_wedge_sphere() -> SpaceDescriptor {
        SpaceDescriptor::new("S1vS2", GroupDescriptor::free_abelian(1)).with_complex(fixtures::circle_wedge_sphere(), None)
    }

    fn twisted() -> SpaceDescriptor {
        let z2 = GroupDescriptor::free_abelian(2);
        let base = SpaceDescriptor::new("T2", z2.clone()).with_dim(2).aspherical();
        let fiber =
            SpaceDescriptor::new("R2xS2", GroupDescriptor::trivial()).with_dim(4).with_flags(EquivariantFlags::all());
        SpaceDescriptor::new("T2xS2", z2.clone()).with_dim(4).with_structure(Structure::Twisted {
            base: Box::new(base),
            fiber: Box::new(fiber),
            group: z2,
        })
    }

    #[test]
    fn torus_is_pinned() {
        let r = bounds_for(&torus()).unwrap();
        assert_eq!(r.tc("torus7"), Some(Interval::exact(2)));
        assert_eq!(r.get(&Quantity::cat_space("torus7")), Some(Interval::exact(2)));
        assert!(r.assumptions.contains(&"aspherical(torus7)".to_string()));
    }

    #[test]
    fn wedge_with_sphere_has_gap() {
        let r = bounds_for(&circle_wedge_sphere()).unwrap();
        let tc = Quantity::tc_space("S1vS2");
        assert_eq!(r.tc("S1vS2"), Interval::new(2, Some(3)));
        assert!(r.entries(RuleId::R5, &tc).any(|e| e.candidate == Interval::at_most(4)));
        assert!(r.entries(RuleId::R6, &tc).any(|e| e.candidate == Interval::at_most(3)));
        assert!(r.entries(RuleId::R11, &tc).any(|e| e.candidate == Interval::at_least(2)));
    }

    #[test]
    fn twisted_routes_agree() {
        let r = bounds_for(&twisted()).unwrap();
        let tc = Quantity::tc_space("T2xS2");
        assert_eq!(r.get(&Quantity::equivariant(QuantityKind::TcgStar, "R2xS2", "Z^2")), Some(Interval::at_most(4)));
        assert!(r.entries(RuleId::R6, &tc).any(|e| e.candidate == Interval::at_most(6)));
        assert!(r.entries(RuleId::R8, &tc).any(|e| e.candidate == Interval::at_most(6)));
        assert!(r.entries(RuleId::R5, &tc).any(|e| e.candidate == Interval::at_most(8)));
        assert_eq!(r.tc("T2xS2"), Some(Interval::at_most(6)));
    }

    #[test]
    fn disabling_either_route_keeps_the_bound() {
        for off in [RuleId::R6, RuleId::R8] {
            let mut base = FactBase::for_descriptor(&twisted()).unwrap();
            base.propagate_with(None, &[off]).unwrap();
            assert_eq!(base.get(&Quantity::tc_space("T2xS2")), Some(Interval::at_most(6)));
        }
    }

    #[test]
    fn free_group_doubles() {
        let x = SpaceDescriptor::new("wedge2", GroupDescriptor::free(2)).aspherical();
        let r = bounds_for(&x).unwrap();
        assert_eq!(r.tc("wedge2"), Some(Interval::exact(2)));
        assert_eq!(r.get(&Quantity::cat_space("wedge2")), Some(Interval::exact(1)));
    }

    #[test]
    fn lower_bounds_flow_backwards() {
        let g = GroupDescriptor::new("G", GroupClass::Custom, None);
        let x = SpaceDescriptor::new("X", g).with_dim(2);
        let r = bounds_with(&x, &[(Quantity::tc_space("X"), Interval::at_least(6))]).unwrap();
        assert_eq!(r.get(&Quantity::cd_group("G")), Some(Interval::at_least(2)));
        assert_eq!(r.get(&Quantity::tc_group("G")), Some(Interval::at_least(4)));
    }

    #[test]
    fn contradiction_names_both_sources() {
        let err = bounds_with(&torus(), &[(Quantity::tc_space("torus7"), Interval::at_least(3))]).unwrap_err();
        match err {
            BoundsError::Inconsistency { lo, hi, lo_source, hi_source, .. } => {
                assert!(lo > hi);
                assert!(lo_source.starts_with("trace #") && hi_source.starts_with("trace #"));
                assert_ne!(lo_source, hi_source);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn odd_tc_of_free_group_is_inconsistent() {
        let x = SpaceDescriptor::new("X", GroupDescriptor::free(2)).aspherical();
        assert!(matches!(
            bounds_with(&x, &[(Quantity::tc_group("F2"), Interval::at_most(1))]),
            Err(BoundsError::Inconsistency { .. })
        ));
    }

    #[test]
    fn unknown_quantity_rejected() {
        assert!(matches!(
            bounds_with(&torus(), &[(Quantity::tc_space("nope"), Interval::exact(1))]),
            Err(BoundsError::UnknownQuantity(_))
        ));
    }

    #[test]
    fn replay_accepts_honest_traces() {
        for d in [torus(), circle_wedge_sphere(), twisted()] {
            let mut base = FactBase::for_descriptor(&d).unwrap();
            base.propagate().unwrap();
            base.check_consistency().unwrap();
            base.report().check_self_consistent().unwrap();
        }
    }

    #[test]
    fn replay_rejects_tampering() {
        let mut base = FactBase::for_descriptor(&circle_wedge_sphere()).unwrap();
        base.propagate().unwrap();
        let i = base.trace().iter().position(|e| e.rule == RuleId::R6).unwrap();

        let mut forged = base.clone();
        forged.trace_mut()[i].candidate = Interval::at_most(2);
        assert!(matches!(forged.check_consistency(), Err(BoundsError::Replay { .. })));

        let mut relabelled = base.clone();
        relabelled.trace_mut()[i].rule = RuleId::R7;
        assert!(matches!(relabelled.check_consistency(), Err(BoundsError::Replay { .. })));

        let mut dropped = base.clone();
        dropped.trace_mut().retain(|e| e.rule != RuleId::R6);
        assert!(matches!(dropped.check_consistency(), Err(BoundsError::Replay { .. })));
    }

    #[test]
    fn conflicting_descriptors_rejected() {
        let a = SpaceDescriptor::new("S", GroupDescriptor::trivial()).with_dim(2);
        let b = SpaceDescriptor::new("S", GroupDescriptor::trivial()).with_dim(3);
        let x = SpaceDescriptor::new("X", GroupDescriptor::trivial())
            .with_structure(Structure::Product { base: Box::new(a), fiber: Box::new(b) });
        assert!(matches!(bounds_for(&x), Err(BoundsError::InvalidDescriptor(_))));
    }
}
