use super::*;

const HARDDRIVE: &str = include_str!("../../examples/harddrive.pep");

fn n(s: &str) -> Name {
    Name::from(s)
}

fn t(s: &str) -> EventType {
    EventType::new(s).unwrap()
}

fn goto(s: &str) -> Action {
    Action::Transition(n(s))
}

fn when(m: Option<&str>, etype: &str, state: &str) -> Action {
    Action::SetReaction {
        machine: m.map(n),
        etype: t(etype),
        state: n(state),
    }
}

fn ignore(m: Option<&str>, etype: &str) -> Action {
    Action::UnsetReaction {
        machine: m.map(n),
        etype: t(etype),
    }
}

fn emit(etype: &str, to: Option<&str>, ack: Option<&str>) -> Action {
    Action::Emit {
        etype: t(etype),
        to: to.map(n),
        ack_state: ack.map(n),
    }
}

fn start(var: &str, machine: &str) -> Action {
    Action::StartMachine {
        var: n(var),
        machine: n(machine),
    }
}

fn compiled(p: &ProgramDef, machine: &str, state: &str) -> Vec<Action> {
    compile_state(p.machine(machine).unwrap(), state).unwrap()
}

#[test]
fn parses_harddrive_program() {
    let p = parse_program(HARDDRIVE).unwrap();
    let names: Vec<&str> = p.machines.keys().map(|k| k.as_ref()).collect();
    assert_eq!(names, vec!["CPU", "HD", "HDHead", "ProgA", "ProgB"]);
    assert_eq!(p.entry.as_ref(), "CPU");
    let cpu = p.machine("CPU").unwrap();
    let vars: Vec<&str> = cpu.vars.iter().map(|v| v.as_ref()).collect();
    assert_eq!(vars, vec!["ctx", "hd", "hd_reader", "prog_a", "prog_b"]);
    assert_eq!(cpu.init.as_ref(), "setup");
}

#[test]
fn harddrive_alphabet() {
    let p = parse_program(HARDDRIVE).unwrap();
    let mut got: Vec<&str> = p.alphabet.iter().map(|t| t.as_str()).collect();
    got.sort();
    let mut want = vec![
        "halt",
        "cycle",
        "cycle_ack",
        "read",
        "shutdown",
        "interrupt",
        "seek",
        "found_data",
        "return",
    ];
    want.sort();
    assert_eq!(got, want);
}

/// Each state compared against the hand-written process specification of the
/// hard drive example. The hand specification shares one ctx lookup between
/// consecutive uses of the same variable; here each action performs its own.
#[test]
fn golden_harddrive_compile() {
    let p = parse_program(HARDDRIVE).unwrap();
    let golden: Vec<(&str, &str, Vec<Action>)> = vec![
        (
            "CPU",
            "setup",
            vec![
                start("hd", "HD"),
                start("prog_a", "ProgA"),
                start("prog_b", "ProgB"),
                when(None, "cycle", "cycle"),
                when(None, "read", "hd_read"),
                when(None, "shutdown", "halt"),
                goto("listen"),
            ],
        ),
        (
            "CPU",
            "cycle",
            vec![Action::Opaque(n("cycle")), goto("listen")],
        ),
        (
            "CPU",
            "hd_read",
            vec![
                Action::AssignEmitter(n("hd_reader")),
                emit("read", Some("hd"), None),
                when(Some("hd"), "interrupt", "hd_interrupt"),
                goto("listen"),
            ],
        ),
        (
            "CPU",
            "hd_interrupt",
            vec![
                emit("return", Some("hd_reader"), None),
                ignore(Some("hd"), "interrupt"),
                goto("listen"),
            ],
        ),
        (
            "HD",
            "setup",
            vec![
                start("hd_head", "HDHead"),
                when(Some("ctx"), "read", "seek"),
                goto("listen"),
            ],
        ),
        (
            "HD",
            "seek",
            vec![
                ignore(Some("ctx"), "read"),
                emit("seek", Some("hd_head"), None),
                when(Some("hd_head"), "found_data", "found_data"),
                goto("listen"),
            ],
        ),
        (
            "HD",
            "found_data",
            vec![
                ignore(Some("hd_head"), "found_data"),
                when(None, "read", "seek"),
                emit("interrupt", Some("ctx"), None),
                goto("listen"),
            ],
        ),
        (
            "HDHead",
            "setup",
            vec![when(Some("ctx"), "seek", "seek"), goto("listen")],
        ),
        (
            "HDHead",
            "seek",
            vec![Action::Choice(vec![
                vec![emit("found_data", Some("ctx"), None), goto("listen")],
                vec![Action::Opaque(n("seek")), goto("seek")],
            ])],
        ),
        (
            "ProgA",
            "program",
            vec![
                emit("read", Some("ctx"), None),
                when(Some("ctx"), "return", "finish"),
                goto("listen"),
            ],
        ),
        (
            "ProgA",
            "finish",
            vec![
                ignore(Some("ctx"), "return"),
                emit("shutdown", Some("ctx"), None),
                goto("listen"),
            ],
        ),
        (
            "ProgB",
            "cycle",
            vec![emit("cycle", Some("ctx"), Some("cycle")), goto("listen")],
        ),
    ];
    let mut count = 0;
    for (machine, state, want) in &golden {
        assert_eq!(&compiled(&p, machine, state), want, "{machine}.{state}");
        count += 1;
    }
    let total: usize = p.machines.values().map(|m| m.states.len()).sum();
    assert_eq!(count, total, "every user state is covered");
}

#[test]
fn minimal_program() {
    let p = parse_program("machine X { init state a(e) { => a; } } ctl.run(X);").unwrap();
    assert_eq!(p.machines.len(), 1);
    assert_eq!(p.machine("X").unwrap().states.len(), 1);
    assert_eq!(compiled(&p, "X", "a"), vec![goto("a")]);
}

#[test]
fn empty_body_goes_to_listen() {
    let p = parse_program("machine X { init state a(e) { } } ctl.run(X);").unwrap();
    assert_eq!(compiled(&p, "X", "a"), vec![goto("listen")]);
    let names: Vec<&str> = p.alphabet.iter().map(|t| t.as_str()).collect();
    assert_eq!(names, vec!["halt"]);
}

#[test]
fn alphabet_adds_ack_types() {
    let p =
        parse_program("machine X { init state a(e) { emit (\"x\") => a; } } ctl.run(X);").unwrap();
    let names: Vec<&str> = p.alphabet.iter().map(|t| t.as_str()).collect();
    assert_eq!(names, vec!["halt", "x", "x_ack"]);
}

#[test]
fn missing_init_state() {
    let err = parse_program("machine X { state a(e) {} } ctl.run(X);").unwrap_err();
    assert_eq!(
        err,
        FrontendError::MissingInitState {
            machine: "X".into()
        }
    );
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse_program("machine X {\n  init state a(e) { emit \"x\"; }\n}").unwrap_err();
    match err {
        FrontendError::Syntax { pos, .. } => assert_eq!(pos, Pos { line: 2, col: 21 }),
        other => panic!("unexpected {other:?}"),
    }
    // Missing ctl.run.
    assert!(matches!(
        parse_program("machine X { init state a(e) {} }"),
        Err(FrontendError::Syntax { .. })
    ));
    // Unknown statement forms are rejected rather than guessed.
    assert!(matches!(
        parse_program("machine X { init state a(e) { x + 1; } } ctl.run(X);"),
        Err(FrontendError::Syntax { .. })
    ));
}

#[test]
fn semantic_errors() {
    assert!(matches!(
        parse_program("machine X { init state a(e) { m = ctl.start(X, null); } } ctl.run(X);"),
        Err(FrontendError::UnknownVariable { .. })
    ));
    assert!(matches!(
        parse_program(
            "machine X { m = null; init state a(e) { m = ctl.start(Y, null); } } ctl.run(X);"
        ),
        Err(FrontendError::UnknownMachine { .. })
    ));
    assert!(matches!(
        parse_program("machine X { init state a(e) {} } ctl.run(Y);"),
        Err(FrontendError::UnknownMachine { .. })
    ));
    assert!(matches!(
        parse_program("machine X { init state listen(e) {} } ctl.run(X);"),
        Err(FrontendError::ReservedStateName { .. })
    ));
    assert!(matches!(
        parse_program("machine X { init state a(e) { => b; } } ctl.run(X);"),
        Err(FrontendError::UnknownState { .. })
    ));
    assert!(matches!(
        parse_program("machine X { v = null; init state a(e) { v = f.emitter; } } ctl.run(X);"),
        Err(FrontendError::UnknownVariable { .. })
    ));
    assert!(matches!(
        parse_program("machine X { init state a(e) { => a; <x>; } } ctl.run(X);"),
        Err(FrontendError::Unreachable { .. })
    ));
    assert!(matches!(
        parse_program("machine X { init state a(e) { emit (\"a b\"); } } ctl.run(X);"),
        Err(FrontendError::InvalidEventType { .. })
    ));
}

#[test]
fn quoted_machine_reference_is_a_variable() {
    let p = parse_program(
        "machine X { init state a(e) { ignore when \"ctx\" emits \"r\"; when ctx emits \"r\" => a; } } ctl.run(X);",
    )
    .unwrap();
    assert_eq!(
        compiled(&p, "X", "a"),
        vec![
            ignore(Some("ctx"), "r"),
            when(Some("ctx"), "r", "a"),
            goto("listen")
        ]
    );
}

#[test]
fn choice_continues_with_following_statements() {
    let p = parse_program(
        "machine X { init state a(e) { { <l>; } or { => a; } emit (\"x\"); } } ctl.run(X);",
    )
    .unwrap();
    assert_eq!(
        compiled(&p, "X", "a"),
        vec![Action::Choice(vec![
            vec![
                Action::Opaque(n("l")),
                emit("x", None, None),
                goto("listen")
            ],
            vec![Action::Opaque(n("a")), goto("a")],
        ])]
    );
}

#[test]
fn dump_is_stable_and_sorted() {
    let p = parse_program(HARDDRIVE).unwrap();
    let a = dump_program(&p);
    let b = dump_program(&parse_program(HARDDRIVE).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with("program\n  entry CPU\n  alphabet cycle cycle_ack found_data halt"));
    let cpu = a.find("machine CPU").unwrap();
    let hd = a.find("machine HD\n").unwrap();
    assert!(cpu < hd);
    assert!(a.contains(
        "    state seek(e)\n      choice\n        branch\n          emit \"found_data\" to ctx\n"
    ));
}
