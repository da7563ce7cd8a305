//! Recursive-descent parser producing the unvalidated surface program.

use super::lexer::{Tok, Token};
use super::{FrontendError, Pos, StateDef, Stmt, StmtKind};
use crate::events::Name;

pub struct SurfaceMachine {
    pub name: Name,
    pub pos: Pos,
    pub vars: Vec<(Name, Pos)>,
    pub states: Vec<(StateDef, bool)>,
}

pub struct SurfaceProgram {
    pub machines: Vec<SurfaceMachine>,
    pub run: (Name, Pos),
}

pub struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, FrontendError>;

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, at: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.at + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(FrontendError::syntax(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if *self.peek() == tok {
            Ok(self.next().pos)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        if self.is_kw(kw) {
            Ok(self.next().pos)
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<(Name, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.next().pos;
                Ok((Name::from(s), pos))
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn string(&mut self) -> PResult<(Name, Pos)> {
        match self.peek().clone() {
            Tok::Str(s) => {
                let pos = self.next().pos;
                Ok((Name::from(s), pos))
            }
            _ => self.unexpected("string literal"),
        }
    }

    /// Machine reference: a bare variable or a quoted one (`"ctx"`).
    fn machine_ref(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.next();
                Ok(Name::from(s))
            }
            _ => self.unexpected("machine variable"),
        }
    }

    pub fn program(mut self) -> PResult<SurfaceProgram> {
        let mut machines = Vec::new();
        let mut run = None;
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) if s == "machine" => machines.push(self.machine()?),
                Tok::Ident(s) if s == "ctl" => {
                    let pos = self.pos();
                    if run.is_some() {
                        return Err(FrontendError::syntax(pos, "only one `ctl.run` is allowed"));
                    }
                    self.next();
                    self.expect(Tok::Dot)?;
                    self.keyword("run")?;
                    self.expect(Tok::LParen)?;
                    let name = self.ident()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    run = Some(name);
                }
                _ => return self.unexpected("`machine` or `ctl.run`"),
            }
        }
        let run = match run {
            Some(r) => r,
            None => return Err(FrontendError::syntax(self.pos(), "missing `ctl.run(...)`")),
        };
        Ok(SurfaceProgram { machines, run })
    }

    fn machine(&mut self) -> PResult<SurfaceMachine> {
        let pos = self.keyword("machine")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut vars = Vec::new();
        let mut states = Vec::new();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Ident(s) if s == "init" || s == "state" => {
                    let init = self.is_kw("init");
                    if init {
                        self.next();
                    }
                    states.push((self.state()?, init));
                }
                Tok::Ident(_) => {
                    let (var, vpos) = self.ident()?;
                    self.expect(Tok::Assign)?;
                    self.keyword("null")?;
                    self.expect(Tok::Semi)?;
                    vars.push((var, vpos));
                }
                _ => return self.unexpected("variable declaration, state or `}`"),
            }
        }
        Ok(SurfaceMachine {
            name,
            pos,
            vars,
            states,
        })
    }

    fn state(&mut self) -> PResult<StateDef> {
        self.keyword("state")?;
        let (name, pos) = self.ident()?;
        self.expect(Tok::LParen)?;
        let (param, _) = self.ident()?;
        self.expect(Tok::RParen)?;
        let body = self.block()?;
        Ok(StateDef {
            name,
            param,
            body,
            pos,
        })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return self.unexpected("`}`");
            }
            out.push(self.stmt()?);
        }
        self.next();
        Ok(out)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Arrow => {
                self.next();
                let (target, _) = self.ident()?;
                self.expect(Tok::Semi)?;
                StmtKind::Goto(target)
            }
            Tok::Lt => {
                self.next();
                let (label, _) = self.ident()?;
                self.expect(Tok::Gt)?;
                self.expect(Tok::Semi)?;
                StmtKind::Opaque(label)
            }
            Tok::LBrace => {
                let mut branches = vec![self.block()?];
                while self.is_kw("or") {
                    self.next();
                    branches.push(self.block()?);
                }
                if branches.len() < 2 {
                    return Err(FrontendError::syntax(
                        pos,
                        "a block needs at least one `or` branch",
                    ));
                }
                StmtKind::Choice(branches)
            }
            Tok::Ident(kw) if kw == "when" => {
                self.next();
                let (machine, etype) = self.reaction_head()?;
                self.expect(Tok::Arrow)?;
                let (target, _) = self.ident()?;
                self.expect(Tok::Semi)?;
                StmtKind::When {
                    machine,
                    etype,
                    target,
                }
            }
            Tok::Ident(kw) if kw == "ignore" => {
                self.next();
                self.keyword("when")?;
                let (machine, etype) = self.reaction_head()?;
                self.expect(Tok::Semi)?;
                StmtKind::Ignore { machine, etype }
            }
            Tok::Ident(kw) if kw == "emit" && *self.peek_at(1) == Tok::LParen => {
                self.next();
                self.expect(Tok::LParen)?;
                let (etype, _) = self.string()?;
                self.expect(Tok::RParen)?;
                let to = if self.is_kw("to") {
                    self.next();
                    Some(self.machine_ref()?)
                } else {
                    None
                };
                let ack_target = if *self.peek() == Tok::Arrow {
                    self.next();
                    Some(self.ident()?.0)
                } else {
                    None
                };
                self.expect(Tok::Semi)?;
                StmtKind::Emit {
                    etype,
                    to,
                    ack_target,
                }
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Assign => {
                let (var, _) = self.ident()?;
                self.expect(Tok::Assign)?;
                if self.is_kw("ctl") && *self.peek_at(1) == Tok::Dot {
                    self.next();
                    self.expect(Tok::Dot)?;
                    self.keyword("start")?;
                    self.expect(Tok::LParen)?;
                    let (machine, _) = self.ident()?;
                    self.expect(Tok::Comma)?;
                    self.keyword("null")?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    StmtKind::Start { var, machine }
                } else {
                    let (event, _) = self.ident()?;
                    self.expect(Tok::Dot)?;
                    self.keyword("emitter")?;
                    self.expect(Tok::Semi)?;
                    StmtKind::Emitter { var, event }
                }
            }
            _ => return self.unexpected("statement"),
        };
        Ok(Stmt { kind, pos })
    }

    /// `"t"` or `m emits "t"`, after `when`.
    fn reaction_head(&mut self) -> PResult<(Option<Name>, Name)> {
        let quoted_machine = matches!(self.peek(), Tok::Str(_))
            && matches!(self.peek_at(1), Tok::Ident(s) if s == "emits");
        if matches!(self.peek(), Tok::Str(_)) && !quoted_machine {
            let (etype, _) = self.string()?;
            return Ok((None, etype));
        }
        let machine = self.machine_ref()?;
        self.keyword("emits")?;
        let (etype, _) = self.string()?;
        Ok((Some(machine), etype))
    }
}
