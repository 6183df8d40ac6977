//! Misbehaving-runner fixture for protocol robustness tests. The first
//! argument selects a behavior:
//!
//!   echo          answer every vector set with an empty result list
//!   wrong-answer  answer every case with a fixed bogus digest
//!   crash         exit abruptly after the handshake, stderr note included
//!   hang          never answer the first vector-set request
//!   garbage       reply with a non-JSON line
//!   partial       write half a frame with no newline, then exit
//!   huge          reply with a line larger than the 64 MiB cap
//!   banner        print a banner line before the handshake response

use std::io::{BufRead, BufReader, Read, Write};

use serde_json::{json, Value};

fn read_line(reader: &mut impl BufRead) -> Option<String> {
    let mut line = String::new();
    match reader.read_line(&mut line) {
        Ok(0) | Err(_) => None,
        Ok(_) => Some(line),
    }
}

fn send(out: &mut impl Write, value: Value) {
    let _ = writeln!(out, "{value}");
    let _ = out.flush();
}

fn response(id: u64, payload: Value) -> Value {
    json!({"kind": "response", "id": id, "payload": payload})
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_else(|| "echo".to_string());
    // tolerate the --coverage flag so fixtures work under coverage sessions
    let stdin = std::io::stdin();
    let mut reader = BufReader::new(stdin.lock());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();

    if mode == "banner" {
        send(&mut out, json!("fixture runner v1 starting up"));
    }

    // handshake
    let Some(_) = read_line(&mut reader) else { return };
    send(&mut out, response(0, json!({"hello": true})));

    if mode == "crash" {
        eprintln!("fixture runner: simulated crash");
        std::process::exit(101);
    }

    while let Some(line) = read_line(&mut reader) {
        let frame: Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let id = frame.get("id").and_then(Value::as_u64).unwrap_or(0);
        let payload = frame.get("payload").cloned().unwrap_or(json!({}));
        let vs_id = payload.get("vsId").and_then(Value::as_u64).unwrap_or(0);
        match mode.as_str() {
            "echo" => {
                send(&mut out, response(id, json!({"vsId": vs_id, "testResults": []})));
            }
            "wrong-answer" => {
                let mut results = Vec::new();
                for group in payload
                    .get("testGroups")
                    .and_then(Value::as_array)
                    .cloned()
                    .unwrap_or_default()
                {
                    for case in group.get("tests").and_then(Value::as_array).cloned().unwrap_or_default() {
                        if let Some(tc_id) = case.get("tcId").and_then(Value::as_u64) {
                            results.push(json!({"tcId": tc_id, "md": "DEADBEEF"}));
                        }
                    }
                }
                send(&mut out, response(id, json!({"vsId": vs_id, "testResults": results})));
            }
            "hang" => loop {
                std::thread::sleep(std::time::Duration::from_secs(3600));
            },
            "garbage" => {
                let _ = writeln!(out, "this is not a frame");
                let _ = out.flush();
            }
            "partial" => {
                let _ = write!(out, "{{\"kind\":\"response\",\"id\":{id},\"payl");
                let _ = out.flush();
                return;
            }
            "huge" => {
                // a single line beyond the 64 MiB cap
                let chunk = vec![b'A'; 1 << 20];
                let _ = out.write_all(b"\"");
                for _ in 0..65 {
                    let _ = out.write_all(&chunk);
                }
                let _ = out.write_all(b"\"\n");
                let _ = out.flush();
                return;
            }
            _ => {
                send(&mut out, response(id, json!({"vsId": vs_id, "testResults": []})));
            }
        }
    }
    // drain any remaining input so the supervisor never sees EPIPE
    let mut rest = Vec::new();
    let _ = reader.read_to_end(&mut rest);
}
