//! The interleaving executor.
//!
//! Each process publishes [`Offer`]s. A step is either a solo internal
//! action or a pair of complementary offers (`a` with `a'`) that fire
//! together as `a''`. Actions in the encapsulation set never fire solo.

pub mod explore;
pub mod label;
pub mod policy;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::control::{DropReason, MachineControl};
use crate::events::{Event, EventError, InstanceId, Name};
use crate::frontend::{FrontendError, ProgramDef};
use crate::instance::{init_instance, CompiledMachine, Instance, Part};
use crate::queue::IllegalQueueStep;
use crate::table::{IllegalTableStep, Index, Lookup, TableId};
use crate::trace::{EntryKind, TraceEntry};
use label::{
    in_encapsulation_set, ActionLabel, ActionName, Offer, OfferPayload, Pattern, Payload, Polarity,
    SubMatch, Subscript,
};
use policy::Policy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Frontend(FrontendError),
    #[error(transparent)]
    Event(EventError),
    #[error(transparent)]
    Queue(#[from] IllegalQueueStep),
    #[error(transparent)]
    Table(#[from] IllegalTableStep),
    #[error("illegal step {label} for {process}")]
    IllegalStep { process: String, label: String },
    #[error("step is not enabled: {0}")]
    NotEnabled(String),
}

/// A validated program with every machine lowered for execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledProgram {
    pub def: ProgramDef,
    pub machines: BTreeMap<Name, CompiledMachine>,
}

impl CompiledProgram {
    pub fn new(def: ProgramDef) -> Result<Self, EngineError> {
        let mut machines = BTreeMap::new();
        for (name, m) in &def.machines {
            machines.insert(name.clone(), CompiledMachine::lower(m, &def.alphabet)?);
        }
        Ok(CompiledProgram { def, machines })
    }

    fn machine(&self, name: &str) -> &CompiledMachine {
        &self.machines[name]
    }
}

/// A sequential process of the running system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessId {
    Sched,
    QMc,
    McIn,
    Inst(InstanceId, Part),
}

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessId::Sched => f.write_str("MC.sched"),
            ProcessId::QMc => f.write_str("q(MC)"),
            ProcessId::McIn => f.write_str("MC.in"),
            ProcessId::Inst(id, part) => f.write_str(&part.process_name(*id)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Solo {
        process: ProcessId,
        tag: u32,
        label: ActionLabel,
    },
    /// `initiator` made the plain offer, `responder` the primed one.
    Comm {
        label: ActionLabel,
        initiator: (ProcessId, u32),
        responder: (ProcessId, u32),
    },
}

impl Step {
    pub fn label(&self) -> &ActionLabel {
        match self {
            Step::Solo { label, .. } | Step::Comm { label, .. } => label,
        }
    }

    pub fn involves(&self, p: ProcessId) -> bool {
        match self {
            Step::Solo { process, .. } => *process == p,
            Step::Comm {
                initiator,
                responder,
                ..
            } => initiator.0 == p || responder.0 == p,
        }
    }

    pub fn processes(&self) -> Vec<ProcessId> {
        match self {
            Step::Solo { process, .. } => vec![*process],
            Step::Comm {
                initiator,
                responder,
                ..
            } => vec![initiator.0, responder.0],
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let procs: Vec<String> = self.processes().iter().map(|p| p.to_string()).collect();
        write!(f, "{} [{}]", self.label(), procs.join(", "))
    }
}

/// Knobs that alter the semantics; only for demonstrating what they protect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EngineConfig {
    /// When false, event handlers stop offering their halt step.
    pub fail_safe: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { fail_safe: true }
    }
}

/// Every process state of the system; the unit of memoization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    pub mc: MachineControl,
    /// Shared between states until modified.
    pub instances: BTreeMap<InstanceId, Arc<Instance>>,
}

impl World {
    pub fn is_terminated(&self) -> bool {
        self.instances.is_empty()
            && self.mc.sched_halted()
            && self.mc.queue.is_halted()
            && self.mc.handler.is_halted()
    }

    pub fn processes(&self) -> Vec<ProcessId> {
        let mut out = vec![ProcessId::Sched, ProcessId::QMc, ProcessId::McIn];
        for id in self.instances.keys() {
            out.extend(Part::ALL.iter().map(|&p| ProcessId::Inst(*id, p)));
        }
        out
    }

    fn table(&self, p: ProcessId) -> Option<&crate::table::LookupTable> {
        match p {
            ProcessId::Inst(id, Part::Ctx) => self.instances.get(&id).map(|i| &i.ctx),
            ProcessId::Inst(id, Part::Reactions) => self.instances.get(&id).map(|i| &i.reactions),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Terminated,
    Deadlocked,
    StepCapReached,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Terminated => "terminated",
            Outcome::Deadlocked => "deadlocked",
            Outcome::StepCapReached => "step-cap-reached",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: Outcome,
    pub steps: u64,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone)]
pub struct SystemState {
    pub world: World,
    program: Arc<CompiledProgram>,
    config: EngineConfig,
    steps: u64,
    entries: u64,
}

impl SystemState {
    /// Machine control with `n = 1`, `live = {1}`, in parallel with the
    /// entry machine as instance 1 without context.
    pub fn boot(def: ProgramDef) -> Result<Self, EngineError> {
        Self::boot_with(def, EngineConfig::default())
    }

    pub fn boot_with(def: ProgramDef, config: EngineConfig) -> Result<Self, EngineError> {
        let program = Arc::new(CompiledProgram::new(def)?);
        Ok(Self::from_program(program, config))
    }

    pub fn from_program(program: Arc<CompiledProgram>, config: EngineConfig) -> Self {
        let entry = program.machine(&program.def.entry);
        let first = init_instance(entry, InstanceId(1), InstanceId::NONE);
        SystemState {
            world: World {
                mc: MachineControl::boot(),
                instances: BTreeMap::from([(InstanceId(1), Arc::new(first))]),
            },
            program,
            config,
            steps: 0,
            entries: 0,
        }
    }

    pub fn program(&self) -> &Arc<CompiledProgram> {
        &self.program
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    /// Number of steps applied so far.
    pub fn step_count(&self) -> u64 {
        self.steps
    }

    pub fn is_terminated(&self) -> bool {
        self.world.is_terminated()
    }

    pub(crate) fn with_world(&self, world: World) -> Self {
        SystemState {
            world,
            program: self.program.clone(),
            config: self.config,
            steps: 0,
            entries: 0,
        }
    }

    fn offers(&self, p: ProcessId) -> Vec<Offer> {
        let w = &self.world;
        match p {
            ProcessId::Sched => w.mc.sched_offers(),
            ProcessId::QMc => w.mc.queue.offers(),
            ProcessId::McIn => w.mc.mc_in_offers(self.config.fail_safe),
            ProcessId::Inst(id, part) => {
                let inst = &w.instances[&id];
                inst.offers(
                    part,
                    self.program.machine(&inst.machine),
                    self.config.fail_safe,
                )
            }
        }
    }

    /// A receptive pattern admits a payload, refined with owner context.
    fn admits(&self, owner: ProcessId, pattern: &Pattern, payload: &Payload) -> bool {
        if !pattern.admits(payload) {
            return false;
        }
        match (pattern, payload) {
            (Pattern::AbsentIndex, Payload::Index(i)) => self
                .world
                .table(owner)
                .is_some_and(|t| t.qry(i) == Lookup::NotFound),
            (Pattern::AnyMachine, Payload::Machine(m)) => self.program.machines.contains_key(m),
            _ => true,
        }
    }

    /// The communication of a plain and a primed offer, if defined.
    fn communicate(&self, a: (ProcessId, &Offer), b: (ProcessId, &Offer)) -> Option<ActionLabel> {
        let (pa, oa) = a;
        let (pb, ob) = b;
        if oa.name != ob.name || pa == pb {
            return None;
        }
        let sub = match (oa.sub, ob.sub) {
            (SubMatch::Exact(x), SubMatch::Exact(y)) if x == y => x,
            (SubMatch::Exact(x), SubMatch::Any) | (SubMatch::Any, SubMatch::Exact(x)) => x,
            _ => return None,
        };
        let payload = match (&oa.payload, &ob.payload) {
            (OfferPayload::Fixed(x), OfferPayload::Fixed(y)) if x == y => x.clone(),
            (OfferPayload::Fixed(x), OfferPayload::Pattern(pat)) if self.admits(pb, pat, x) => {
                x.clone()
            }
            (OfferPayload::Pattern(pat), OfferPayload::Fixed(x)) if self.admits(pa, pat, x) => {
                x.clone()
            }
            _ => return None,
        };
        Some(ActionLabel::new(oa.name, sub, Polarity::Comm, payload))
    }

    /// Every step that can fire now, in a deterministic order.
    pub fn enabled(&self) -> Vec<Step> {
        let mut plain: Vec<(ProcessId, Offer)> = Vec::new();
        let mut primed: Vec<(ProcessId, Offer)> = Vec::new();
        let mut steps = Vec::new();
        for p in self.world.processes() {
            for o in self.offers(p) {
                let solo_label = o.label().filter(|l| {
                    l.polarity == Polarity::Plain && !in_encapsulation_set(l.name, l.sub)
                });
                if let Some(label) = solo_label {
                    steps.push(Step::Solo {
                        process: p,
                        tag: o.tag,
                        label,
                    });
                    continue;
                }
                match o.polarity {
                    Polarity::Plain => plain.push((p, o)),
                    Polarity::Primed => primed.push((p, o)),
                    Polarity::Comm => {}
                }
            }
        }
        // Stable sorts keep process order within each action name.
        plain.sort_by_key(|(_, o)| o.name);
        primed.sort_by_key(|(_, o)| o.name);
        let mut r = 0;
        for (pa, oa) in &plain {
            while r < primed.len() && primed[r].1.name < oa.name {
                r += 1;
            }
            for (pb, ob) in primed[r..].iter().take_while(|(_, o)| o.name == oa.name) {
                if let Some(label) = self.communicate((*pa, oa), (*pb, ob)) {
                    steps.push(Step::Comm {
                        label,
                        initiator: (*pa, oa.tag),
                        responder: (*pb, ob.tag),
                    });
                }
            }
        }
        steps
    }

    /// Applies `step` after checking it is enabled.
    pub fn step(&mut self, step: &Step) -> Result<Vec<TraceEntry>, EngineError> {
        if !self.enabled().contains(step) {
            return Err(EngineError::NotEnabled(step.to_string()));
        }
        self.apply(step)
    }

    /// Applies a step taken from [`SystemState::enabled`] of this state.
    pub(crate) fn apply(&mut self, step: &Step) -> Result<Vec<TraceEntry>, EngineError> {
        let drops = self.transition(step)?;
        let entry = match step {
            Step::Solo { process, label, .. } => {
                self.entry(EntryKind::Solo, Some(label.clone()), &[*process], None)
            }
            Step::Comm {
                label,
                initiator,
                responder,
            } => self.entry(
                EntryKind::Comm,
                Some(label.clone()),
                &[initiator.0, responder.0],
                None,
            ),
        };
        let mut out = vec![entry];
        for (process, event, reason) in drops {
            out.push(self.entry(EntryKind::Drop(reason), None, &[process], Some(event)));
        }
        Ok(out)
    }

    /// Applies a step without recording trace entries; returns the drops it caused.
    pub(crate) fn transition(
        &mut self,
        step: &Step,
    ) -> Result<Vec<(ProcessId, Event, DropReason)>, EngineError> {
        let mut drops = Vec::new();
        match step {
            Step::Solo {
                process,
                tag,
                label,
            } => self.fire(*process, label, *tag, &mut drops)?,
            Step::Comm {
                label,
                initiator,
                responder,
            } => {
                self.fire(initiator.0, label, initiator.1, &mut drops)?;
                self.fire(responder.0, label, responder.1, &mut drops)?;
            }
        }
        self.world.instances.retain(|_, inst| !inst.is_terminated());
        self.steps += 1;
        Ok(drops)
    }

    fn entry(
        &mut self,
        kind: EntryKind,
        label: Option<ActionLabel>,
        actors: &[ProcessId],
        event: Option<Event>,
    ) -> TraceEntry {
        let event = event.or_else(|| label.as_ref().and_then(|l| l.event().cloned()));
        let e = TraceEntry {
            step: self.entries,
            kind,
            label,
            actors: actors.iter().map(|p| p.to_string()).collect(),
            event,
        };
        self.entries += 1;
        e
    }

    fn fire(
        &mut self,
        p: ProcessId,
        label: &ActionLabel,
        tag: u32,
        drops: &mut Vec<(ProcessId, Event, DropReason)>,
    ) -> Result<(), EngineError> {
        let program = self.program.clone();
        let w = &mut self.world;
        match p {
            ProcessId::Sched => {
                let effect = w.mc.sched_fire(label)?;
                if let Some((machine, id, ctxid)) = effect.spawn {
                    let inst = init_instance(program.machine(&machine), id, ctxid);
                    w.instances.insert(id, Arc::new(inst));
                }
                if let Some((e, reason)) = effect.dropped {
                    drops.push((p, e, reason));
                }
            }
            ProcessId::QMc => w.mc.queue.apply(label)?,
            ProcessId::McIn => w.mc.handler.fire(label)?,
            ProcessId::Inst(id, part) => {
                let inst = w
                    .instances
                    .get_mut(&id)
                    .ok_or_else(|| EngineError::IllegalStep {
                        process: p.to_string(),
                        label: label.to_string(),
                    })?;
                let inst = Arc::make_mut(inst);
                let machine = program.machine(&inst.machine);
                let effect = inst.fire(part, machine, &program.def.alphabet, label, tag)?;
                if let Some(e) = effect.dropped {
                    drops.push((p, e, DropReason::NoReaction));
                }
            }
        }
        Ok(())
    }

    /// Runs until termination, deadlock or `max_steps` steps, handing each
    /// trace entry to `sink` as it is produced.
    pub fn run_with(
        &mut self,
        policy: &mut dyn Policy,
        max_steps: u64,
        mut sink: impl FnMut(&TraceEntry),
    ) -> Result<Outcome, EngineError> {
        let mut taken = 0;
        loop {
            if self.is_terminated() {
                return Ok(Outcome::Terminated);
            }
            let steps = self.enabled();
            if steps.is_empty() {
                return Ok(Outcome::Deadlocked);
            }
            if taken >= max_steps {
                return Ok(Outcome::StepCapReached);
            }
            let chosen = policy.choose(&steps);
            for entry in self.apply(&steps[chosen])? {
                sink(&entry);
            }
            taken += 1;
        }
    }

    /// [`SystemState::run_with`], collecting the trace.
    pub fn run(
        &mut self,
        policy: &mut dyn Policy,
        max_steps: u64,
    ) -> Result<RunReport, EngineError> {
        let mut trace = Vec::new();
        let outcome = self.run_with(policy, max_steps, |e| trace.push(e.clone()))?;
        Ok(RunReport {
            outcome,
            steps: self.steps,
            trace,
        })
    }

    /// Whether `sub` of a pending teardown can be halted right now.
    pub(crate) fn halt_enabled(steps: &[Step], sub: Subscript) -> bool {
        steps.iter().any(|s| {
            let l = s.label();
            l.name == ActionName::Halt && l.sub == sub && l.polarity == Polarity::Comm
        })
    }

    /// Looks up a variable of instance `id`'s ctx table.
    pub fn ctx_value(&self, id: InstanceId, var: &str) -> Option<crate::table::Value> {
        let inst = self.world.instances.get(&id)?;
        debug_assert_eq!(inst.ctx.tid(), TableId::Ctx(id));
        match inst.ctx.qry(&Index::Var(Name::from(var))) {
            Lookup::Found(v) => Some(v),
            Lookup::NotFound => None,
        }
    }
}
