//! Terminal game against the exact engine.

use std::io::{BufRead, Write};
use std::sync::Arc;

use anyhow::{Context, Result};
use slowcolor::strategy::{lister_exact, painter_exact, ListerStrategy, PainterStrategy, SharedSolver};
use slowcolor::{GameState, Graph, Role, Transcript, VertexSet};

pub enum Ending {
    Finished(Transcript),
    /// Input ran out mid-game.
    Aborted(Transcript),
}

/// Reads lines until one parses to a set accepted by `accept`; the error
/// text is shown and the prompt repeated otherwise.
fn ask<R: BufRead, W: Write>(
    input: &mut R,
    out: &mut W,
    prompt: &str,
    g: &Graph,
    mut accept: impl FnMut(VertexSet) -> Result<(), String>,
) -> Result<Option<VertexSet>> {
    loop {
        write!(out, "{prompt}> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        match g.parse_vertex_set(&line) {
            Err(e) => writeln!(out, "rejected: {e}")?,
            Ok(s) => match accept(s) {
                Ok(()) => return Ok(Some(s)),
                Err(reason) => writeln!(out, "rejected: {reason}")?,
            },
        }
    }
}

pub fn run<R: BufRead, W: Write>(
    g: &Graph,
    human: Role,
    solver: SharedSolver,
    input: &mut R,
    out: &mut W,
) -> Result<Ending> {
    let lister = lister_exact(Arc::clone(&solver));
    let painter = painter_exact(solver);
    let mut state = GameState::new(Arc::new(g.clone()));
    writeln!(out, "you are {}; vertices {}", role_name(human), g.format_set(g.vertices()))?;
    while !state.is_terminal() {
        writeln!(out, "remaining {}  score {}", g.format_set(state.remaining()), state.score())?;
        let mark = match human {
            Role::Lister => {
                let s = &state;
                match ask(input, out, "mark", g, |m| s.check_mark(m).map_err(|e| e.reason(g)))? {
                    Some(m) => m,
                    None => return Ok(Ending::Aborted(state.to_transcript())),
                }
            }
            Role::Painter => {
                let m = lister.mark(&state).context("engine mark")?;
                writeln!(out, "engine marks {}", g.format_set(m))?;
                m
            }
        };
        let reply = match human {
            Role::Painter => {
                let s = &state;
                match ask(input, out, "delete", g, |d| s.check_reply(mark, d).map_err(|e| e.reason(g)))? {
                    Some(d) => d,
                    None => return Ok(Ending::Aborted(state.to_transcript())),
                }
            }
            Role::Lister => {
                let d = painter.reply(&state, mark).context("engine reply")?;
                writeln!(out, "engine deletes {}", g.format_set(d))?;
                d
            }
        };
        state = state.apply_move(mark, reply).context("validated move")?;
    }
    writeln!(out, "final score {}", state.score())?;
    Ok(Ending::Finished(state.to_transcript()))
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Lister => "Lister",
        Role::Painter => "Painter",
    }
}
