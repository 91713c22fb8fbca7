use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use tower::ServiceExt;

use hexatope::hexboard::HexBoard2D;
use hexatope::hexsolve::{solve, Position};
use hexatope::service::{router, SessionStore};

fn app() -> (Router, Arc<SessionStore>, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(SessionStore::open(dir.path()).unwrap());
    (router(store.clone()), store, dir)
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), 1 << 20).await.unwrap();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, v)
}

fn new_game(rows: usize, cols: usize, engine: &str, human: &str) -> Value {
    json!({"rows": rows, "cols": cols, "engine": engine, "humanColor": human, "seed": 3})
}

#[tokio::test]
async fn create_fetch_play_analyse() {
    let (app, _, _dir) = app();
    let (st, g) = call(&app, Method::POST, "/games", Some(new_game(3, 3, "exact", "White"))).await;
    assert_eq!(st, StatusCode::CREATED, "{g}");
    let id = g["id"].as_str().unwrap().to_string();
    assert_eq!(g["toMove"], "White");
    assert_eq!(g["board"], json!(["...", "...", "..."]));
    assert_eq!(g["finished"], false);

    let (st, a) = call(&app, Method::GET, &format!("/games/{id}/analysis"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(a["winnerWithOptimalPlay"], "White");

    let (st, g2) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(g2["id"], g["id"]);

    let (st, after) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": 1, "col": 1}))).await;
    assert_eq!(st, StatusCode::OK, "{after}");
    let hist = after["history"].as_array().unwrap();
    assert_eq!(hist.len(), 2, "human move plus engine reply");
    assert_eq!(hist[0], json!({"player": "White", "row": 1, "col": 1}));
    assert_eq!(hist[1]["player"], "Black");
    assert_eq!(after["toMove"], "White");
}

#[tokio::test]
async fn engine_reply_is_optimal() {
    let board = HexBoard2D::new(3, 3).unwrap();
    for opening in [(0, 0), (0, 2), (1, 1), (2, 1)] {
        let (app, store, _dir) = app();
        let (_, g) = call(&app, Method::POST, "/games", Some(new_game(3, 3, "exact", "White"))).await;
        let id = g["id"].as_str().unwrap();
        let (st, _) = call(
            &app,
            Method::POST,
            &format!("/games/{id}/moves"),
            Some(json!({"row": opening.0, "col": opening.1})),
        )
        .await;
        assert_eq!(st, StatusCode::OK);
        let before = Position::empty(board).play(opening).unwrap();
        let value = solve(&before).unwrap().winner;
        let after = store.get(id).unwrap();
        assert_eq!(after.history.len(), 2);
        assert_eq!(solve(after.position()).unwrap().winner, value, "opening {opening:?}");
    }
}

#[tokio::test]
async fn error_codes() {
    let (app, _, _dir) = app();
    let (st, e) = call(&app, Method::GET, "/games/doesnotexist", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    assert_eq!(e["code"], "not_found");

    let (st, e) = call(&app, Method::POST, "/games", Some(json!({"rows": 3}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "bad_request");

    let (st, e) = call(&app, Method::POST, "/games", Some(new_game(0, 3, "random", "White"))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST, "{e}");

    let (st, e) = call(&app, Method::POST, "/games", Some(new_game(5, 5, "exact", "White"))).await;
    assert!(st == StatusCode::BAD_REQUEST || st == StatusCode::CONFLICT, "{st} {e}");

    let (_, g) = call(&app, Method::POST, "/games", Some(new_game(2, 2, "random", "White"))).await;
    let id = g["id"].as_str().unwrap();
    let (st, e) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": 7, "col": 0}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(e["code"], "illegal_move");

    let (st, e) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": "x"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "bad_request");

    let (st, e) = call(&app, Method::GET, &format!("/games/{id}/analysis"), None).await;
    assert_eq!(st, StatusCode::CONFLICT, "analysis is exact-engine only: {e}");
    assert_eq!(e["code"], "unavailable");
}

#[tokio::test]
async fn play_to_the_end() {
    let (app, _, _dir) = app();
    let (_, g) = call(&app, Method::POST, "/games", Some(new_game(3, 2, "pairing", "White"))).await;
    let id = g["id"].as_str().unwrap().to_string();
    let mut g = g;
    let mut moves = 0;
    while !g["finished"].as_bool().unwrap() {
        let board: Vec<String> = serde_json::from_value(g["board"].clone()).unwrap();
        let (r, c) = board
            .iter()
            .enumerate()
            .find_map(|(r, row)| row.find('.').map(|c| (r, c)))
            .unwrap();
        let (st, next) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": r, "col": c}))).await;
        assert_eq!(st, StatusCode::OK, "{next}");
        g = next;
        moves += 1;
        assert!(moves <= 6);
    }
    assert_eq!(g["winner"], "Black", "pairing strategy wins for Black");
    assert!(!g["path"].as_array().unwrap().is_empty());
    let (st, e) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": 0, "col": 0}))).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(e["code"], "game_over");
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id = {
        let app = router(Arc::new(SessionStore::open(dir.path()).unwrap()));
        let (_, g) = call(&app, Method::POST, "/games", Some(new_game(3, 3, "random", "Black"))).await;
        assert_eq!(g["history"].as_array().unwrap().len(), 1, "engine opens for White");
        let id = g["id"].as_str().unwrap().to_string();
        let (st, _) = call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": 2, "col": 2}))).await;
        assert!(st == StatusCode::OK || st == StatusCode::CONFLICT);
        id
    };
    let app = router(Arc::new(SessionStore::open(dir.path()).unwrap()));
    let (st, g) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert!(!g["history"].as_array().unwrap().is_empty());
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_sessions() {
    let (app, _, _dir) = app();
    let mut tasks = Vec::new();
    for k in 0..8usize {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let (st, g) = call(&app, Method::POST, "/games", Some(new_game(4, 4, "random", "White"))).await;
            assert_eq!(st, StatusCode::CREATED);
            let id = g["id"].as_str().unwrap().to_string();
            let (st, g) = call(
                &app,
                Method::POST,
                &format!("/games/{id}/moves"),
                Some(json!({"row": k % 4, "col": (k / 4) % 4})),
            )
            .await;
            assert_eq!(st, StatusCode::OK, "{g}");
            id
        }));
    }
    let mut ids = Vec::new();
    for t in tasks {
        ids.push(t.await.unwrap());
    }
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), 8);

    // many moves against one session: each is applied exactly once
    let (_, g) = call(&app, Method::POST, "/games", Some(new_game(4, 4, "random", "White"))).await;
    let id = g["id"].as_str().unwrap().to_string();
    let mut tasks = Vec::new();
    for t in 0..16usize {
        let app = app.clone();
        let id = id.clone();
        tasks.push(tokio::spawn(async move {
            call(&app, Method::POST, &format!("/games/{id}/moves"), Some(json!({"row": t / 4, "col": t % 4}))).await.0
        }));
    }
    let mut ok = 0;
    for t in tasks {
        if t.await.unwrap() == StatusCode::OK {
            ok += 1;
        }
    }
    let (_, g) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
    let hist = g["history"].as_array().unwrap();
    let humans = hist.iter().filter(|m| m["player"] == "White").count();
    assert_eq!(humans, ok);
    let mut tiles: Vec<(u64, u64)> = hist
        .iter()
        .map(|m| (m["row"].as_u64().unwrap(), m["col"].as_u64().unwrap()))
        .collect();
    let n = tiles.len();
    tiles.sort();
    tiles.dedup();
    assert_eq!(tiles.len(), n, "no tile played twice");
}
