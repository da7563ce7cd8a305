//! A running state-machine instance: program process, ctx and reaction
//! tables, in/out queues, and in/out event handlers.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::label::{
    ActionLabel, ActionName, Offer, Pattern, Payload, Polarity, QueueId, SubMatch, Subscript,
};
use crate::engine::EngineError;
use crate::events::{ack_type_of, Alphabet, Event, EventType, InstanceId, Name};
use crate::frontend::{compile_state, Action, FrontendError, MachineDef, HALT_STATE, LISTEN_STATE};
use crate::queue::EventQueue;
use crate::table::{Index, LookupTable, ReactionKey, TableId, Value};

/// One primitive step of a state body after expanding an [`Action`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    /// `start_id(M)`
    Start(Name),
    /// `new_id'_id(n)`, binding the register.
    AwaitNewId,
    /// `set_ctx(id)(var, n)` with `n` from the register.
    SetCtxFromReg(Name),
    /// `get'_ctx(id)(var, n)`, binding the register.
    LookupCtx(Name),
    /// `set_reactions(id)((m, t), s)` with `m` the register or 0.
    SetReaction {
        from_reg: bool,
        etype: EventType,
        state: Name,
    },
    UnsetReaction {
        from_reg: bool,
        etype: EventType,
    },
    /// `enq_out(id)((id, d, t, a))` with `d` the register or 0.
    Enq {
        to_reg: bool,
        etype: EventType,
        ack: bool,
    },
    /// `set_ctx(id)(var, sndr(e))`
    SetCtxEmitter(Name),
    Opaque(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Goto(Name),
    Choice(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub ops: Vec<Op>,
    pub tail: Tail,
}

/// A machine lowered to blocks of [`Op`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledMachine {
    pub name: Name,
    pub init: Name,
    pub blocks: Vec<Block>,
    pub states: BTreeMap<Name, usize>,
}

impl CompiledMachine {
    pub fn lower(def: &MachineDef, alphabet: &Alphabet) -> Result<Self, EngineError> {
        let mut m = CompiledMachine {
            name: def.name.clone(),
            init: def.init.clone(),
            blocks: Vec::new(),
            states: BTreeMap::new(),
        };
        for state in def.states.keys() {
            let actions = compile_state(def, state).map_err(EngineError::Frontend)?;
            let b = m.lower_block(&actions, alphabet)?;
            m.states.insert(state.clone(), b);
        }
        Ok(m)
    }

    fn lower_block(
        &mut self,
        actions: &[Action],
        alphabet: &Alphabet,
    ) -> Result<usize, EngineError> {
        let checked = |t: &EventType| alphabet.event_type(t.as_str()).map_err(EngineError::Event);
        let mut ops = Vec::new();
        let mut tail = None;
        for action in actions {
            match action {
                Action::Transition(s) => {
                    tail = Some(Tail::Goto(s.clone()));
                    break;
                }
                Action::Choice(branches) => {
                    let mut children = Vec::with_capacity(branches.len());
                    for b in branches {
                        children.push(self.lower_block(b, alphabet)?);
                    }
                    tail = Some(Tail::Choice(children));
                    break;
                }
                Action::StartMachine { var, machine } => {
                    ops.push(Op::Start(machine.clone()));
                    ops.push(Op::AwaitNewId);
                    ops.push(Op::SetCtxFromReg(var.clone()));
                }
                Action::SetReaction {
                    machine,
                    etype,
                    state,
                } => {
                    if let Some(v) = machine {
                        ops.push(Op::LookupCtx(v.clone()));
                    }
                    ops.push(Op::SetReaction {
                        from_reg: machine.is_some(),
                        etype: checked(etype)?,
                        state: state.clone(),
                    });
                }
                Action::UnsetReaction { machine, etype } => {
                    if let Some(v) = machine {
                        ops.push(Op::LookupCtx(v.clone()));
                    }
                    ops.push(Op::UnsetReaction {
                        from_reg: machine.is_some(),
                        etype: checked(etype)?,
                    });
                }
                Action::Emit {
                    etype,
                    to,
                    ack_state,
                } => {
                    if let Some(v) = to {
                        ops.push(Op::LookupCtx(v.clone()));
                    }
                    ops.push(Op::Enq {
                        to_reg: to.is_some(),
                        etype: checked(etype)?,
                        ack: ack_state.is_some(),
                    });
                    if let Some(s) = ack_state {
                        ops.push(Op::SetReaction {
                            from_reg: to.is_some(),
                            etype: checked(&ack_type_of(etype))?,
                            state: s.clone(),
                        });
                    }
                }
                Action::AssignEmitter(v) => ops.push(Op::SetCtxEmitter(v.clone())),
                Action::Opaque(l) => ops.push(Op::Opaque(l.clone())),
            }
        }
        let tail = tail.ok_or_else(|| {
            EngineError::Frontend(FrontendError::Unreachable {
                pos: Default::default(),
            })
        })?;
        self.blocks.push(Block { ops, tail });
        Ok(self.blocks.len() - 1)
    }

    /// Blocks whose first op is a first step of `block`.
    fn frontier(&self, block: usize, out: &mut Vec<usize>) {
        let b = &self.blocks[block];
        if !b.ops.is_empty() {
            out.push(block);
        } else if let Tail::Choice(children) = &b.tail {
            for &c in children {
                self.frontier(c, out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ListenPhase {
    /// Polling the incoming queue.
    Poll,
    /// Looking up a reaction `(sndr(e), type(e))`.
    MachineLookup(Event),
    /// Looking up a reaction `(0, type(e))`.
    RegularLookup(Event),
    /// Enqueueing the acknowledgment before entering the target state.
    Ack { ack: Event, target: Name },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProgPhase {
    Running {
        block: usize,
        pc: usize,
    },
    Listen(ListenPhase),
    /// In the halt state, waiting for machine control to take the `halt` request.
    HaltRequest,
    /// Halting the remaining internal subprocesses, in any order.
    Teardown(BTreeSet<Subscript>),
    /// Cycle of transitions without any step in between.
    Diverged,
    Done,
}

/// What a fired step did besides changing state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FireEffect {
    /// An event the listen state dequeued but had no reaction for.
    pub dropped: Option<Event>,
}

/// The program process of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProgramProcess {
    id: InstanceId,
    state: Name,
    last: Event,
    reg: InstanceId,
    phase: ProgPhase,
}

impl ProgramProcess {
    fn new(machine: &CompiledMachine, id: InstanceId) -> Self {
        let mut p = ProgramProcess {
            id,
            state: machine.init.clone(),
            last: Event::sentinel(),
            reg: InstanceId::NONE,
            phase: ProgPhase::Done,
        };
        p.enter(machine, machine.init.clone());
        p
    }

    pub fn state(&self) -> &str {
        &self.state
    }

    pub fn last_event(&self) -> &Event {
        &self.last
    }

    pub fn phase(&self) -> &ProgPhase {
        &self.phase
    }

    pub fn is_halted(&self) -> bool {
        self.phase == ProgPhase::Done
    }

    fn enter(&mut self, machine: &CompiledMachine, state: Name) {
        let mut seen = BTreeSet::new();
        let mut s = state;
        loop {
            self.state = s.clone();
            if s.as_ref() == LISTEN_STATE {
                self.phase = ProgPhase::Listen(ListenPhase::Poll);
                return;
            }
            if s.as_ref() == HALT_STATE {
                self.phase = ProgPhase::HaltRequest;
                return;
            }
            if !seen.insert(s.clone()) {
                self.phase = ProgPhase::Diverged;
                return;
            }
            let block = machine.states[&s];
            let b = &machine.blocks[block];
            match (&b.tail, b.ops.is_empty()) {
                (Tail::Goto(next), true) => s = next.clone(),
                _ => {
                    self.phase = ProgPhase::Running { block, pc: 0 };
                    return;
                }
            }
        }
    }

    fn teardown_targets(id: InstanceId) -> BTreeSet<Subscript> {
        BTreeSet::from([
            Subscript::Ctx(id),
            Subscript::Reactions(id),
            Subscript::Q(QueueId::In(id)),
            Subscript::Q(QueueId::Out(id)),
            Subscript::In(id),
            Subscript::Out(id),
        ])
    }

    fn reaction_index(&self, from_reg: bool, etype: &EventType) -> Index {
        let m = if from_reg { self.reg } else { InstanceId::NONE };
        Index::Reaction(ReactionKey::new(m, etype.clone()))
    }

    fn op_offer(&self, op: &Op) -> Offer {
        let id = self.id;
        match op {
            Op::Start(m) => Offer::plain(
                ActionName::Start,
                Subscript::Inst(id),
                Payload::Machine(m.clone()),
            ),
            Op::AwaitNewId => Offer::receive(
                ActionName::NewId,
                SubMatch::Exact(Subscript::Inst(id)),
                Polarity::Primed,
                Pattern::AnyId,
            ),
            Op::SetCtxFromReg(v) => Offer::plain(
                ActionName::Set,
                Subscript::Ctx(id),
                Payload::Entry(Index::Var(v.clone()), Value::Id(self.reg)),
            ),
            Op::LookupCtx(v) => Offer::receive(
                ActionName::Get,
                SubMatch::Exact(Subscript::Ctx(id)),
                Polarity::Primed,
                Pattern::EntryAt(Index::Var(v.clone())),
            ),
            Op::SetReaction {
                from_reg,
                etype,
                state,
            } => Offer::plain(
                ActionName::Set,
                Subscript::Reactions(id),
                Payload::Entry(
                    self.reaction_index(*from_reg, etype),
                    Value::State(state.clone()),
                ),
            ),
            Op::UnsetReaction { from_reg, etype } => Offer::plain(
                ActionName::Unset,
                Subscript::Reactions(id),
                Payload::Index(self.reaction_index(*from_reg, etype)),
            ),
            Op::Enq { to_reg, etype, ack } => {
                let dest = if *to_reg { self.reg } else { InstanceId::NONE };
                let e = Event::new_unchecked(id, dest, etype.clone(), *ack);
                Offer::plain(ActionName::Enq, Subscript::Out(id), Payload::Event(e))
            }
            Op::SetCtxEmitter(v) => Offer::plain(
                ActionName::Set,
                Subscript::Ctx(id),
                Payload::Entry(Index::Var(v.clone()), Value::Id(self.last.sndr())),
            ),
            Op::Opaque(l) => Offer::fixed(ActionLabel::internal(id, l.clone())),
        }
    }

    /// Steps offered while executing a user state body.
    pub fn exec_offers(&self, machine: &CompiledMachine) -> Vec<Offer> {
        let ProgPhase::Running { block, pc } = self.phase else {
            return Vec::new();
        };
        let b = &machine.blocks[block];
        if pc < b.ops.len() {
            return vec![self.op_offer(&b.ops[pc]).with_tag(block as u32)];
        }
        let Tail::Choice(children) = &b.tail else {
            return Vec::new();
        };
        let mut frontier = Vec::new();
        for &c in children {
            machine.frontier(c, &mut frontier);
        }
        frontier
            .into_iter()
            .map(|f| self.op_offer(&machine.blocks[f].ops[0]).with_tag(f as u32))
            .collect()
    }

    /// Steps offered by the predefined listen state.
    pub fn listen_offers(&self) -> Vec<Offer> {
        let id = self.id;
        let ProgPhase::Listen(phase) = &self.phase else {
            return Vec::new();
        };
        let lookup = |e: &Event, machine: InstanceId| {
            let index = Index::Reaction(ReactionKey::new(machine, e.etype().clone()));
            vec![
                Offer::receive(
                    ActionName::Get,
                    SubMatch::Exact(Subscript::Reactions(id)),
                    Polarity::Primed,
                    Pattern::EntryAt(index.clone()),
                ),
                Offer::primed(
                    ActionName::NotSet,
                    Subscript::Reactions(id),
                    Payload::Index(index),
                ),
            ]
        };
        match phase {
            ListenPhase::Poll => vec![
                Offer::primed(ActionName::Qempty, Subscript::In(id), Payload::None),
                Offer::receive(
                    ActionName::Deq,
                    SubMatch::Exact(Subscript::In(id)),
                    Polarity::Primed,
                    Pattern::AnyEvent,
                ),
            ],
            ListenPhase::MachineLookup(e) => lookup(e, e.sndr()),
            ListenPhase::RegularLookup(e) => lookup(e, InstanceId::NONE),
            ListenPhase::Ack { ack, .. } => vec![Offer::plain(
                ActionName::Enq,
                Subscript::Out(id),
                Payload::Event(ack.clone()),
            )],
        }
    }

    /// Steps offered by the predefined halt state.
    pub fn halt_offers(&self) -> Vec<Offer> {
        match &self.phase {
            ProgPhase::HaltRequest => vec![Offer::plain(
                ActionName::Halt,
                Subscript::Inst(self.id),
                Payload::None,
            )],
            ProgPhase::Teardown(rest) => rest
                .iter()
                .map(|&s| Offer::plain(ActionName::Halt, s, Payload::None))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn offers(&self, machine: &CompiledMachine) -> Vec<Offer> {
        match self.phase {
            ProgPhase::Running { .. } => self.exec_offers(machine),
            ProgPhase::Listen(_) => self.listen_offers(),
            ProgPhase::HaltRequest | ProgPhase::Teardown(_) => self.halt_offers(),
            ProgPhase::Diverged | ProgPhase::Done => Vec::new(),
        }
    }

    pub fn fire(
        &mut self,
        machine: &CompiledMachine,
        alphabet: &Alphabet,
        label: &ActionLabel,
        tag: u32,
    ) -> Result<FireEffect, EngineError> {
        let illegal = || EngineError::IllegalStep {
            process: format!("prog({})", self.id),
            label: label.to_string(),
        };
        let mut effect = FireEffect::default();
        match self.phase.clone() {
            ProgPhase::Running { mut block, mut pc } => {
                if pc >= machine.blocks[block].ops.len() {
                    let Tail::Choice(children) = &machine.blocks[block].tail else {
                        return Err(illegal());
                    };
                    let mut frontier = Vec::new();
                    for &c in children {
                        machine.frontier(c, &mut frontier);
                    }
                    if !frontier.contains(&(tag as usize)) {
                        return Err(illegal());
                    }
                    block = tag as usize;
                    pc = 0;
                }
                let b = &machine.blocks[block];
                let op = b.ops.get(pc).ok_or_else(illegal)?;
                if !self.op_offer(op).covers(label) {
                    return Err(illegal());
                }
                match (op, &label.payload) {
                    (Op::AwaitNewId, Payload::Id(n)) => self.reg = *n,
                    (Op::LookupCtx(_), Payload::Entry(_, Value::Id(n))) => self.reg = *n,
                    (Op::LookupCtx(_), _) => return Err(illegal()),
                    _ => {}
                }
                pc += 1;
                if pc < b.ops.len() {
                    self.phase = ProgPhase::Running { block, pc };
                } else {
                    match &b.tail {
                        Tail::Goto(s) => self.enter(machine, s.clone()),
                        Tail::Choice(_) => self.phase = ProgPhase::Running { block, pc },
                    }
                }
            }
            ProgPhase::Listen(phase) => match (phase, label.name, &label.payload) {
                (ListenPhase::Poll, ActionName::Qempty, _) => {
                    self.phase = ProgPhase::Listen(ListenPhase::Poll)
                }
                (ListenPhase::Poll, ActionName::Deq, Payload::Event(e)) => {
                    self.phase = ProgPhase::Listen(ListenPhase::MachineLookup(e.clone()))
                }
                (
                    ListenPhase::MachineLookup(e) | ListenPhase::RegularLookup(e),
                    ActionName::Get,
                    Payload::Entry(_, Value::State(target)),
                ) => {
                    self.last = e.clone();
                    if e.ack() {
                        let ack = alphabet
                            .make_event(self.id, e.sndr(), ack_type_of(e.etype()).as_str(), false)
                            .map_err(EngineError::Event)?;
                        self.phase = ProgPhase::Listen(ListenPhase::Ack {
                            ack,
                            target: target.clone(),
                        });
                    } else {
                        self.enter(machine, target.clone());
                    }
                }
                (ListenPhase::MachineLookup(e), ActionName::NotSet, _) => {
                    self.phase = ProgPhase::Listen(ListenPhase::RegularLookup(e))
                }
                (ListenPhase::RegularLookup(e), ActionName::NotSet, _) => {
                    effect.dropped = Some(e);
                    self.phase = ProgPhase::Listen(ListenPhase::Poll);
                }
                (ListenPhase::Ack { target, .. }, ActionName::Enq, _) => {
                    self.enter(machine, target)
                }
                _ => return Err(illegal()),
            },
            ProgPhase::HaltRequest if label.name == ActionName::Halt => {
                self.phase = ProgPhase::Teardown(Self::teardown_targets(self.id));
            }
            ProgPhase::Teardown(mut rest) if label.name == ActionName::Halt => {
                if !rest.remove(&label.sub) {
                    return Err(illegal());
                }
                self.phase = if rest.is_empty() {
                    ProgPhase::Done
                } else {
                    ProgPhase::Teardown(rest)
                };
            }
            _ => return Err(illegal()),
        }
        Ok(effect)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HandlerKind {
    /// `M^in` of an instance.
    In(InstanceId),
    /// `M^out` of an instance.
    Out(InstanceId),
    /// Machine control's incoming event handler.
    Mc,
}

/// An event handler that moves events between a queue and machine control.
///
/// While holding an event it still accepts its halt request.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Handler {
    kind: HandlerKind,
    holding: Option<Event>,
    halted: bool,
}

impl Handler {
    pub fn new(kind: HandlerKind) -> Self {
        Handler {
            kind,
            holding: None,
            halted: false,
        }
    }

    pub fn kind(&self) -> HandlerKind {
        self.kind
    }

    pub fn holding(&self) -> Option<&Event> {
        self.holding.as_ref()
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    fn halt_sub(&self) -> Subscript {
        match self.kind {
            HandlerKind::In(n) => Subscript::In(n),
            HandlerKind::Out(n) => Subscript::Out(n),
            HandlerKind::Mc => Subscript::McIn,
        }
    }

    /// Offers of the handler. `fail_safe = false` withdraws every halt option;
    /// it exists only to reproduce the deadlock that fail-safety prevents.
    pub fn offers(&self, fail_safe: bool) -> Vec<Offer> {
        if self.halted {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(2);
        match (&self.holding, self.kind) {
            (None, HandlerKind::Out(n)) => out.push(Offer::receive(
                ActionName::Deq,
                SubMatch::Exact(Subscript::Out(n)),
                Polarity::Primed,
                Pattern::AnyEvent,
            )),
            (None, HandlerKind::In(n)) => out.push(Offer::receive(
                ActionName::Distrib,
                SubMatch::Exact(Subscript::Inst(n)),
                Polarity::Primed,
                Pattern::AnyEvent,
            )),
            (None, HandlerKind::Mc) => out.push(Offer::receive(
                ActionName::Out,
                SubMatch::Any,
                Polarity::Primed,
                Pattern::AnyEvent,
            )),
            (Some(e), HandlerKind::Out(n)) => out.push(Offer::plain(
                ActionName::Out,
                Subscript::Inst(n),
                Payload::Event(e.clone()),
            )),
            (Some(e), HandlerKind::In(n)) => out.push(Offer::plain(
                ActionName::Enq,
                Subscript::In(n),
                Payload::Event(e.clone()),
            )),
            (Some(e), HandlerKind::Mc) => out.push(Offer::plain(
                ActionName::Enq,
                Subscript::Mc,
                Payload::Event(e.clone()),
            )),
        }
        if fail_safe {
            out.push(Offer::primed(
                ActionName::Halt,
                self.halt_sub(),
                Payload::None,
            ));
        }
        out
    }

    pub fn fire(&mut self, label: &ActionLabel) -> Result<(), EngineError> {
        let illegal = || EngineError::IllegalStep {
            process: format!("{:?}", self.kind),
            label: label.to_string(),
        };
        if self.halted {
            return Err(illegal());
        }
        match (label.name, &label.payload, self.holding.is_some()) {
            (ActionName::Halt, Payload::None, _) if label.sub == self.halt_sub() => {
                self.halted = true;
                self.holding = None;
            }
            (ActionName::Deq | ActionName::Distrib | ActionName::Out, Payload::Event(e), false) => {
                self.holding = Some(e.clone())
            }
            (ActionName::Out | ActionName::Enq, Payload::Event(e), true)
                if self.holding.as_ref() == Some(e) =>
            {
                self.holding = None
            }
            _ => return Err(illegal()),
        }
        Ok(())
    }
}

/// One of the seven subprocesses of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Prog,
    Ctx,
    Reactions,
    QIn,
    QOut,
    HIn,
    HOut,
}

impl Part {
    pub const ALL: [Part; 7] = [
        Part::Prog,
        Part::Ctx,
        Part::Reactions,
        Part::QIn,
        Part::QOut,
        Part::HIn,
        Part::HOut,
    ];

    pub fn process_name(self, id: InstanceId) -> String {
        match self {
            Part::Prog => format!("prog({id})"),
            Part::Ctx => format!("ctx({id})"),
            Part::Reactions => format!("reactions({id})"),
            Part::QIn => format!("q(in({id}))"),
            Part::QOut => format!("q(out({id}))"),
            Part::HIn => format!("in({id})"),
            Part::HOut => format!("out({id})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub id: InstanceId,
    pub machine: Name,
    pub ctxid: InstanceId,
    pub prog: ProgramProcess,
    pub ctx: LookupTable,
    pub reactions: LookupTable,
    pub qin: EventQueue,
    pub qout: EventQueue,
    pub hin: Handler,
    pub hout: Handler,
}

/// Creates instance `id` of `machine` with context `ctxid`.
///
/// The reaction table starts with `(ctxid, "halt") -> halt` unless the
/// instance has no context.
pub fn init_instance(machine: &CompiledMachine, id: InstanceId, ctxid: InstanceId) -> Instance {
    let ctx = BTreeMap::from([(
        Index::Var(Name::from(crate::frontend::CTX_VAR)),
        Value::Id(ctxid),
    )]);
    let mut reactions = BTreeMap::new();
    if !ctxid.is_none() {
        reactions.insert(
            Index::Reaction(ReactionKey::new(ctxid, EventType::halt())),
            Value::State(Name::from(HALT_STATE)),
        );
    }
    Instance {
        id,
        machine: machine.name.clone(),
        ctxid,
        prog: ProgramProcess::new(machine, id),
        ctx: LookupTable::new(TableId::Ctx(id), ctx),
        reactions: LookupTable::new(TableId::Reactions(id), reactions),
        qin: EventQueue::new(QueueId::In(id)),
        qout: EventQueue::new(QueueId::Out(id)),
        hin: Handler::new(HandlerKind::In(id)),
        hout: Handler::new(HandlerKind::Out(id)),
    }
}

impl Instance {
    pub fn is_halted(&self, part: Part) -> bool {
        match part {
            Part::Prog => self.prog.is_halted(),
            Part::Ctx => self.ctx.is_halted(),
            Part::Reactions => self.reactions.is_halted(),
            Part::QIn => self.qin.is_halted(),
            Part::QOut => self.qout.is_halted(),
            Part::HIn => self.hin.is_halted(),
            Part::HOut => self.hout.is_halted(),
        }
    }

    /// Whether all seven subprocesses have halted.
    pub fn is_terminated(&self) -> bool {
        Part::ALL.iter().all(|&p| self.is_halted(p))
    }

    pub fn offers(&self, part: Part, machine: &CompiledMachine, fail_safe: bool) -> Vec<Offer> {
        match part {
            Part::Prog => self.prog.offers(machine),
            Part::Ctx => self.ctx.offers(),
            Part::Reactions => self.reactions.offers(),
            Part::QIn => self.qin.offers(),
            Part::QOut => self.qout.offers(),
            Part::HIn => self.hin.offers(fail_safe),
            Part::HOut => self.hout.offers(fail_safe),
        }
    }

    pub fn fire(
        &mut self,
        part: Part,
        machine: &CompiledMachine,
        alphabet: &Alphabet,
        label: &ActionLabel,
        tag: u32,
    ) -> Result<FireEffect, EngineError> {
        match part {
            Part::Prog => return self.prog.fire(machine, alphabet, label, tag),
            Part::Ctx => self.ctx.apply(label)?,
            Part::Reactions => self.reactions.apply(label)?,
            Part::QIn => self.qin.apply(label)?,
            Part::QOut => self.qout.apply(label)?,
            Part::HIn => self.hin.fire(label)?,
            Part::HOut => self.hout.fire(label)?,
        }
        Ok(FireEffect::default())
    }
}
