//! Minimal JSON-over-HTTP client shared by the scorer and classifier adapters.

use std::time::Duration;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HttpError {
    /// Connection failure or timeout; safe to retry.
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
}

impl HttpError {
    pub fn is_retryable(&self) -> bool {
        match self {
            HttpError::Transport(_) => true,
            HttpError::Status { status, .. } => *status >= 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HttpClient {
    agent: ureq::Agent,
    retries: u32,
    backoff: Duration,
}

impl HttpClient {
    pub fn new(timeout: Duration, retries: u32) -> Self {
        Self {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
            retries,
            backoff: Duration::from_millis(100),
        }
    }

    /// POSTs `body` and returns the response text, retrying transient failures.
    pub fn post_json(&self, url: &str, body: &serde_json::Value) -> Result<String, HttpError> {
        let mut attempt = 0;
        loop {
            let result = self.agent.post(url).send_json(body.clone());
            let outcome = match result {
                Ok(resp) => resp.into_string().map_err(|e| HttpError::Transport(e.to_string())),
                Err(ureq::Error::Status(status, resp)) => Err(HttpError::Status {
                    status,
                    body: resp.into_string().unwrap_or_default(),
                }),
                Err(ureq::Error::Transport(t)) => Err(HttpError::Transport(t.to_string())),
            };
            match outcome {
                Err(e) if e.is_retryable() && attempt < self.retries => {
                    std::thread::sleep(self.backoff * 2u32.pow(attempt));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}
