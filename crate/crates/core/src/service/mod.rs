//! HEX game sessions against an engine, persisted as one JSON-lines log per
//! session, and the HTTP front end.

mod http;

pub use http::{router, serve};

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexboard::{winner_2d, winner_by_connectivity, Cell, HexBoard2D, Player};
use crate::hexsolve::{pairing_move, solve, Position, SolveError, DEFAULT_TILE_CAP};

pub const DATA_DIR_ENV: &str = "HEXATOPE_DATA_DIR";
pub const MAX_PLAY_TILES: usize = 64;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("no game with id {0:?}")]
    NotFound(String),
    #[error("{0}")]
    IllegalMove(String),
    #[error("game is over")]
    GameOver,
    #[error("it is not the human player's turn")]
    NotYourTurn,
    #[error("{0}")]
    Unavailable(String),
    #[error("corrupt session log {id}: {message}")]
    Corrupt { id: String, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::IllegalMove(_) => "illegal_move",
            ServiceError::GameOver => "game_over",
            ServiceError::NotYourTurn => "not_your_turn",
            ServiceError::Unavailable(_) => "unavailable",
            ServiceError::Corrupt { .. } => "corrupt_session",
            ServiceError::Io(_) => "io_error",
        }
    }

    /// HTTP status: 400, 404, 409, or 500 for storage failures.
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::BadRequest(_) => 400,
            ServiceError::NotFound(_) => 404,
            ServiceError::IllegalMove(_)
            | ServiceError::GameOver
            | ServiceError::NotYourTurn
            | ServiceError::Unavailable(_) => 409,
            ServiceError::Corrupt { .. } | ServiceError::Io(_) => 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    Exact,
    Pairing,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NewGame {
    pub rows: usize,
    pub cols: usize,
    pub engine: EngineMode,
    pub human_color: Player,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub player: Player,
    pub row: usize,
    pub col: usize,
}

/// One line of a session log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum LogLine {
    Create {
        id: String,
        created: u64,
        #[serde(flatten)]
        game: NewGame,
    },
    Move(MoveRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GameSession {
    pub id: String,
    pub rows: usize,
    pub cols: usize,
    pub engine: EngineMode,
    pub human_color: Player,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub history: Vec<MoveRecord>,
    #[serde(skip)]
    position: Option<Position>,
    pub to_move: Option<Player>,
    /// One string per row: `W`, `B` or `.`.
    pub board: Vec<String>,
    pub finished: bool,
    pub winner: Option<Player>,
    pub path: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Analysis {
    pub winner_with_optimal_play: Player,
    pub best_move: Option<(usize, usize)>,
    pub nodes: u64,
}

fn solve_err(e: SolveError) -> ServiceError {
    match e {
        SolveError::Illegal(m) => ServiceError::IllegalMove(m),
        other => ServiceError::Unavailable(other.to_string()),
    }
}

impl GameSession {
    fn validate(g: &NewGame) -> Result<HexBoard2D, ServiceError> {
        let board = HexBoard2D::new(g.rows, g.cols).map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        if board.tiles() > MAX_PLAY_TILES {
            return Err(ServiceError::BadRequest(format!(
                "{}×{} board exceeds {MAX_PLAY_TILES} tiles",
                g.rows, g.cols
            )));
        }
        match g.engine {
            EngineMode::Exact if board.tiles() > DEFAULT_TILE_CAP => Err(ServiceError::BadRequest(format!(
                "exact engine supports at most {DEFAULT_TILE_CAP} tiles"
            ))),
            EngineMode::Pairing if g.rows != g.cols + 1 => Err(ServiceError::BadRequest(
                "pairing engine needs an (n+1)×n board".into(),
            )),
            EngineMode::Pairing if g.human_color != Player::White => {
                Err(ServiceError::BadRequest("pairing engine plays Black".into()))
            }
            _ => Ok(board),
        }
    }

    fn fresh(id: String, created: u64, g: &NewGame) -> Result<Self, ServiceError> {
        let board = Self::validate(g)?;
        let mut s = GameSession {
            id,
            rows: g.rows,
            cols: g.cols,
            engine: g.engine,
            human_color: g.human_color,
            seed: g.seed.unwrap_or(0),
            created,
            history: Vec::new(),
            position: Some(Position::empty(board)),
            to_move: None,
            board: Vec::new(),
            finished: false,
            winner: None,
            path: Vec::new(),
        };
        s.refresh();
        Ok(s)
    }

    pub fn position(&self) -> &Position {
        self.position.as_ref().expect("session position")
    }

    /// Recomputes the derived view fields from the position.
    fn refresh(&mut self) {
        let pos = self.position().clone();
        let b = pos.coloring.board;
        self.board = (0..b.rows)
            .map(|i| {
                (0..b.cols)
                    .map(|j| match pos.coloring.get(i, j) {
                        Cell::White => 'W',
                        Cell::Black => 'B',
                        Cell::Grey => '.',
                    })
                    .collect()
            })
            .collect();
        let connected = [Player::White, Player::Black]
            .into_iter()
            .find_map(|p| winner_by_connectivity(&pos.coloring, p).map(|path| (p, path)));
        let outcome = match connected {
            Some(w) => Some(w),
            None if pos.grey_count() == 0 => winner_2d(&pos.coloring).ok().map(|w| (w.winner, w.path)),
            None => None,
        };
        match outcome {
            Some((w, path)) => {
                self.finished = true;
                self.winner = Some(w);
                self.path = path;
                self.to_move = None;
            }
            None => {
                self.finished = false;
                self.winner = None;
                self.path.clear();
                self.to_move = Some(pos.to_move);
            }
        }
    }

    fn apply(&mut self, tile: (usize, usize)) -> Result<MoveRecord, ServiceError> {
        let pos = self.position();
        let player = pos.to_move;
        let next = pos.play(tile).map_err(solve_err)?;
        self.position = Some(next);
        let rec = MoveRecord {
            player,
            row: tile.0,
            col: tile.1,
        };
        self.history.push(rec);
        self.refresh();
        Ok(rec)
    }

    fn engine_move(&self) -> Result<(usize, usize), ServiceError> {
        let pos = self.position();
        match self.engine {
            EngineMode::Exact => {
                let r = solve(pos).map_err(solve_err)?;
                r.best_move.ok_or_else(|| ServiceError::Unavailable("no move available".into()))
            }
            EngineMode::Pairing => {
                let last = self.history.last().map(|m| (m.row, m.col));
                pairing_move(pos, last).map_err(solve_err)
            }
            EngineMode::Random => {
                let b = pos.coloring.board;
                let free: Vec<(usize, usize)> = (0..b.tiles())
                    .map(|t| b.coords(t))
                    .filter(|&(i, j)| pos.coloring.get(i, j) == Cell::Grey)
                    .collect();
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (self.history.len() as u64).wrapping_mul(0x9e37_79b9));
                free.choose(&mut rng)
                    .copied()
                    .ok_or_else(|| ServiceError::Unavailable("board is full".into()))
            }
        }
    }

    /// Plays engine moves while it is the engine's turn.
    fn engine_turns(&mut self) -> Result<Vec<MoveRecord>, ServiceError> {
        let mut out = Vec::new();
        while !self.finished && self.to_move != Some(self.human_color) {
            let t = self.engine_move()?;
            out.push(self.apply(t)?);
        }
        Ok(out)
    }

    fn human_move(&mut self, tile: (usize, usize)) -> Result<Vec<MoveRecord>, ServiceError> {
        if self.finished {
            return Err(ServiceError::GameOver);
        }
        if self.to_move != Some(self.human_color) {
            return Err(ServiceError::NotYourTurn);
        }
        let mut out = vec![self.apply(tile)?];
        out.extend(self.engine_turns()?);
        Ok(out)
    }

    pub fn analysis(&self) -> Result<Analysis, ServiceError> {
        if self.engine != EngineMode::Exact {
            return Err(ServiceError::Unavailable("analysis needs the exact engine".into()));
        }
        if self.finished {
            return Ok(Analysis {
                winner_with_optimal_play: self.winner.expect("finished"),
                best_move: None,
                nodes: 0,
            });
        }
        let r = solve(self.position()).map_err(solve_err)?;
        Ok(Analysis {
            winner_with_optimal_play: r.winner,
            best_move: r.best_move,
            nodes: r.nodes,
        })
    }

    /// Rebuilds a session from its log lines.
    fn replay(id: &str, lines: impl Iterator<Item = String>) -> Result<Self, ServiceError> {
        let corrupt = |message: String| ServiceError::Corrupt {
            id: id.to_string(),
            message,
        };
        let mut session: Option<GameSession> = None;
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: LogLine = serde_json::from_str(&line).map_err(|e| corrupt(format!("line {}: {e}", n + 1)))?;
            match (entry, session.as_mut()) {
                (LogLine::Create { id, created, game }, None) => {
                    session = Some(Self::fresh(id, created, &game).map_err(|e| corrupt(e.to_string()))?);
                }
                (LogLine::Move(m), Some(s)) => {
                    if s.to_move != Some(m.player) {
                        return Err(corrupt(format!("line {}: {} is not to move", n + 1, m.player)));
                    }
                    s.apply((m.row, m.col)).map_err(|e| corrupt(e.to_string()))?;
                }
                _ => return Err(corrupt(format!("line {}: unexpected entry", n + 1))),
            }
        }
        session.ok_or_else(|| corrupt("empty log".into()))
    }
}

/// Sessions on disk under one directory, cached in memory with one lock
/// per session.
pub struct SessionStore {
    dir: PathBuf,
    sessions: Mutex<HashMap<String, Arc<Mutex<GameSession>>>>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric())
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(SessionStore {
            dir,
            sessions: Mutex::new(HashMap::new()),
        })
    }

    /// `$HEXATOPE_DATA_DIR`, or `./hexatope-data`.
    pub fn from_env() -> Result<Self, ServiceError> {
        let dir = std::env::var_os(DATA_DIR_ENV).map_or_else(|| PathBuf::from("hexatope-data"), PathBuf::from);
        Self::open(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn log_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.jsonl"))
    }

    fn append(&self, id: &str, lines: &[LogLine]) -> Result<(), ServiceError> {
        let mut f = OpenOptions::new().create(true).append(true).open(self.log_path(id))?;
        let mut buf = String::new();
        for l in lines {
            buf.push_str(&serde_json::to_string(l).expect("serializable"));
            buf.push('\n');
        }
        f.write_all(buf.as_bytes())?;
        f.flush()?;
        Ok(())
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ServiceError> {
        if !valid_id(id) {
            return Err(ServiceError::NotFound(id.to_string()));
        }
        let mut map = self.sessions.lock().expect("store lock");
        if let Some(s) = map.get(id) {
            return Ok(s.clone());
        }
        let path = self.log_path(id);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(ServiceError::NotFound(id.to_string())),
            Err(e) => return Err(e.into()),
        };
        let lines: Vec<String> = BufReader::new(file).lines().collect::<Result<_, _>>()?;
        let s = Arc::new(Mutex::new(GameSession::replay(id, lines.into_iter())?));
        map.insert(id.to_string(), s.clone());
        Ok(s)
    }

    pub fn create(&self, game: NewGame) -> Result<GameSession, ServiceError> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let id = loop {
            let mut rng = rand::thread_rng();
            let id: String = (0..16).map(|_| format!("{:x}", rng.gen_range(0..16u8))).collect();
            if !self.log_path(&id).exists() {
                break id;
            }
        };
        let mut s = GameSession::fresh(id.clone(), created, &game)?;
        let moves = s.engine_turns()?;
        let mut log = vec![LogLine::Create {
            id: id.clone(),
            created,
            game,
        }];
        log.extend(moves.into_iter().map(LogLine::Move));
        self.append(&id, &log)?;
        self.sessions
            .lock()
            .expect("store lock")
            .insert(id, Arc::new(Mutex::new(s.clone())));
        Ok(s)
    }

    pub fn get(&self, id: &str) -> Result<GameSession, ServiceError> {
        let s = self.session(id)?;
        let g = s.lock().expect("session lock");
        Ok(g.clone())
    }

    /// Plays the human move and the engine's reply; moves within one
    /// session are serialized by its lock.
    pub fn play(&self, id: &str, tile: (usize, usize)) -> Result<GameSession, ServiceError> {
        let s = self.session(id)?;
        let mut g = s.lock().expect("session lock");
        let mut work = g.clone();
        let moves = work.human_move(tile)?;
        self.append(id, &moves.into_iter().map(LogLine::Move).collect::<Vec<_>>())?;
        *g = work;
        Ok(g.clone())
    }

    pub fn analysis(&self, id: &str) -> Result<Analysis, ServiceError> {
        let s = self.session(id)?;
        let g = s.lock().expect("session lock").clone();
        g.analysis()
    }

    /// Drops the in-memory cache; later reads replay the logs.
    pub fn evict_all(&self) {
        self.sessions.lock().expect("store lock").clear();
    }
}
