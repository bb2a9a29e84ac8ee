//! Start the HTTP service on an ephemeral port, post one rate-curve request,
//! print the response, and shut down.
//!
//! For a long-running server use `qkdrate serve --port 8080`.

use serde_json::json;
use tokio::io::{AsyncReadExt, AsyncWriteExt};

use qkdrate::scenarios::preset;
use qkdrate::service::{router, ServiceConfig};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(async move {
        axum::serve(listener, router(&ServiceConfig::default())).await.unwrap();
    });

    let mut body = serde_json::to_value(preset("standard")?.scenario)?;
    body["sweep"] = json!({"variable": "length", "grid": [0.0, 50.0, 100.0, 150.0]});
    let body = body.to_string();

    let mut stream = tokio::net::TcpStream::connect(addr).await?;
    let request = format!(
        "POST /api/rate-curve HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\n\
         Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(request.as_bytes()).await?;
    let mut response = String::new();
    stream.read_to_string(&mut response).await?;
    let payload = response.split("\r\n\r\n").nth(1).unwrap_or_default();
    let doc: serde_json::Value = serde_json::from_str(payload)?;
    println!("{}", serde_json::to_string_pretty(&doc["points"])?);
    Ok(())
}
