//! Minimal chat-completion transport.
//!
//! POSTs `{model, messages, temperature, max_tokens}` to the configured
//! URL and reads `choices[0].message.content` back. The bearer token comes
//! from the `HDRAM_API_KEY` environment variable; requests go out without
//! an Authorization header when it is unset.

use std::time::Duration;

use hdram_core::bench::{ChatEndpoint, ChatRequest, EndpointError};
use serde::Deserialize;

pub const API_KEY_ENV: &str = "HDRAM_API_KEY";

pub struct HttpChatEndpoint {
    client: reqwest::blocking::Client,
    url: String,
    api_key: Option<String>,
}

impl HttpChatEndpoint {
    pub fn new(url: impl Into<String>, timeout_secs: u64) -> Result<Self, EndpointError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(timeout_secs))
            .build()
            .map_err(|e| EndpointError::Transient(e.to_string()))?;
        Ok(HttpChatEndpoint {
            client,
            url: url.into(),
            api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
        })
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: String,
}

impl ChatEndpoint for HttpChatEndpoint {
    fn complete(&self, request: &ChatRequest) -> Result<String, EndpointError> {
        let mut builder = self.client.post(&self.url).json(request);
        if let Some(key) = &self.api_key {
            builder = builder.bearer_auth(key);
        }
        let response = builder.send().map_err(|e| {
            if e.is_timeout() {
                EndpointError::Timeout(e.to_string())
            } else {
                EndpointError::Transient(e.to_string())
            }
        })?;

        let status = response.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(EndpointError::Auth(format!("endpoint returned {status}")));
        }
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(EndpointError::Transient(format!(
                "endpoint returned {status}"
            )));
        }
        if !status.is_success() {
            return Err(EndpointError::Protocol(format!(
                "endpoint returned {status}"
            )));
        }

        let body: ChatResponse = response
            .json()
            .map_err(|e| EndpointError::Protocol(format!("bad response body: {e}")))?;
        body.choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| EndpointError::Protocol("response had no choices".into()))
    }
}
