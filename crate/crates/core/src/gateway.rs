//! Chat-completion gateway with a record/replay cassette store.
//!
//! Every exchange is keyed by a SHA-256 over the model id, the temperature at
//! one decimal and the prompt bytes. Replay serves stored responses verbatim
//! and never touches the transport; record serves a stored response when one
//! exists and otherwise calls the endpoint and persists the result.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::clock::{Clock, SystemClock};

pub const DEFAULT_TEMPERATURE: f64 = 0.7;
pub const DEFAULT_MODEL: &str = "gpt-4";
pub const URL_ENV: &str = "ORACLE_FORGE_LLM_URL";
pub const KEY_ENV: &str = "ORACLE_FORGE_LLM_KEY";
const DEFAULT_URL: &str = "https://api.openai.com/v1/chat/completions";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GatewayError {
    #[error("no cassette recorded for key {key}")]
    CassetteMiss { key: String },
    #[error("transport failed after {attempts} attempt(s): {message}")]
    TransportError { attempts: u32, message: String },
    #[error("authentication failed: {0}")]
    AuthError(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("cassette {path}: {message}")]
    Cassette { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Live,
    Replay,
    Record,
}

impl Mode {
    pub fn needs_transport(self) -> bool {
        !matches!(self, Mode::Replay)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(Mode::Live),
            "replay" => Ok(Mode::Replay),
            "record" => Ok(Mode::Record),
            other => Err(format!("unknown mode `{other}` (expected live, replay or record)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Live => "live",
            Mode::Replay => "replay",
            Mode::Record => "record",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LlmRequest {
    pub model_id: String,
    pub temperature: f64,
    pub prompt: String,
}

impl LlmRequest {
    pub fn new(model_id: impl Into<String>, prompt: impl Into<String>) -> Self {
        LlmRequest {
            model_id: model_id.into(),
            temperature: DEFAULT_TEMPERATURE,
            prompt: prompt.into(),
        }
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.prompt.is_empty() {
            return Err(GatewayError::InvalidRequest("prompt is empty".into()));
        }
        if self.model_id.trim().is_empty() || self.model_id.contains('\0') {
            return Err(GatewayError::InvalidRequest(format!(
                "model id `{}` is empty or contains NUL",
                self.model_id.escape_debug()
            )));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(GatewayError::InvalidRequest(format!(
                "temperature {} is outside [0, 2]",
                self.temperature
            )));
        }
        // The key renders temperature at one decimal; finer values would alias.
        if ((self.temperature * 10.0).round() / 10.0 - self.temperature).abs() > 1e-9 {
            return Err(GatewayError::InvalidRequest(format!(
                "temperature {} has more than one decimal place",
                self.temperature
            )));
        }
        Ok(())
    }

    pub fn temperature_label(&self) -> String {
        format!("{:.1}", self.temperature)
    }

    /// 64 lowercase hex digits of SHA-256 over `model NUL temperature NUL prompt`.
    pub fn cassette_key(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.model_id.as_bytes());
        hasher.update([0u8]);
        hasher.update(self.temperature_label().as_bytes());
        hasher.update([0u8]);
        hasher.update(self.prompt.as_bytes());
        hex::encode(hasher.finalize())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LlmExchange {
    pub request: LlmRequest,
    pub response_text: String,
    pub cassette_key: String,
    pub recorded_at: DateTime<Utc>,
}

impl PartialEq for LlmExchange {
    fn eq(&self, other: &Self) -> bool {
        self.request == other.request
            && self.response_text == other.response_text
            && self.cassette_key == other.cassette_key
    }
}

/// On-disk cassette layout, one file per exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CassetteEntry {
    pub model: String,
    pub temperature: f64,
    pub prompt: String,
    pub response: String,
    pub recorded_at: DateTime<Utc>,
}

impl CassetteEntry {
    fn request(&self) -> LlmRequest {
        LlmRequest {
            model_id: self.model.clone(),
            temperature: self.temperature,
            prompt: self.prompt.clone(),
        }
    }

    fn exchange(&self, key: &str) -> LlmExchange {
        LlmExchange {
            request: self.request(),
            response_text: self.response.clone(),
            cassette_key: key.to_string(),
            recorded_at: self.recorded_at,
        }
    }
}

/// Directory of cassettes loaded eagerly; writes go through a single lock.
#[derive(Debug)]
pub struct CassetteStore {
    dir: PathBuf,
    entries: RwLock<HashMap<String, CassetteEntry>>,
    write_lock: Mutex<()>,
}

impl CassetteStore {
    /// Loads every `<key>.json` under `dir`. A missing directory is an empty store.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, GatewayError> {
        let dir = dir.into();
        let mut entries = HashMap::new();
        if dir.is_dir() {
            let listing = fs::read_dir(&dir).map_err(|e| cassette_err(&dir, e))?;
            for item in listing {
                let path = item.map_err(|e| cassette_err(&dir, e))?.path();
                if path.extension().and_then(|e| e.to_str()) != Some("json") {
                    continue;
                }
                let raw = fs::read_to_string(&path).map_err(|e| cassette_err(&path, e))?;
                let entry: CassetteEntry =
                    serde_json::from_str(&raw).map_err(|e| cassette_err(&path, e))?;
                let key = entry.request().cassette_key();
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                if stem != key {
                    return Err(GatewayError::Cassette {
                        path: path.display().to_string(),
                        message: format!("file name does not match content key {key}"),
                    });
                }
                entries.insert(key, entry);
            }
        }
        Ok(CassetteStore {
            dir,
            entries: RwLock::new(entries),
            write_lock: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cassette map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, request: &LlmRequest) -> Option<LlmExchange> {
        let key = request.cassette_key();
        let entries = self.entries.read().expect("cassette map poisoned");
        entries
            .get(&key)
            .filter(|e| e.request() == *request)
            .map(|e| e.exchange(&key))
    }

    /// Persists an exchange unless its key is already recorded; either way the
    /// stored exchange is returned.
    pub fn record(&self, exchange: &LlmExchange) -> Result<LlmExchange, GatewayError> {
        let _guard = self.write_lock.lock().expect("cassette writer poisoned");
        if let Some(existing) = self.lookup(&exchange.request) {
            return Ok(existing);
        }
        let entry = CassetteEntry {
            model: exchange.request.model_id.clone(),
            temperature: exchange.request.temperature,
            prompt: exchange.request.prompt.clone(),
            response: exchange.response_text.clone(),
            recorded_at: exchange.recorded_at,
        };
        fs::create_dir_all(&self.dir).map_err(|e| cassette_err(&self.dir, e))?;
        let path = self.dir.join(format!("{}.json", exchange.cassette_key));
        let tmp = self.dir.join(format!(".{}.json.tmp", exchange.cassette_key));
        let mut body = serde_json::to_string_pretty(&entry).expect("cassette serializes");
        body.push('\n');
        fs::write(&tmp, body).map_err(|e| cassette_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| cassette_err(&path, e))?;
        self.entries
            .write()
            .expect("cassette map poisoned")
            .insert(exchange.cassette_key.clone(), entry);
        Ok(exchange.clone())
    }
}

fn cassette_err(path: &Path, e: impl fmt::Display) -> GatewayError {
    GatewayError::Cassette {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportFailure {
    Auth(String),
    /// Worth another attempt (timeouts, 429, 5xx).
    Retryable(String),
    Fatal(String),
}

pub trait Transport: Send + Sync {
    fn send(&self, request: &LlmRequest) -> Result<String, TransportFailure>;
}

/// Minimal chat-completion client: one user message, first choice's content.
pub struct HttpTransport {
    url: String,
    key: String,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>, key: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(300)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpTransport {
            url: url.into(),
            key: key.into(),
            agent,
        }
    }

    /// Reads the endpoint from `ORACLE_FORGE_LLM_URL` and the key from `ORACLE_FORGE_LLM_KEY`.
    pub fn from_env() -> Result<Self, GatewayError> {
        let key = std::env::var(KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| GatewayError::AuthError(format!("{KEY_ENV} is not set")))?;
        let url = std::env::var(URL_ENV)
            .ok()
            .filter(|u| !u.trim().is_empty())
            .unwrap_or_else(|| DEFAULT_URL.to_string());
        Ok(HttpTransport::new(url, key))
    }

    pub fn request_body(request: &LlmRequest) -> serde_json::Value {
        serde_json::json!({
            "model": request.model_id,
            "temperature": request.temperature,
            "messages": [{ "role": "user", "content": request.prompt }],
        })
    }
}

impl Transport for HttpTransport {
    fn send(&self, request: &LlmRequest) -> Result<String, TransportFailure> {
        let mut response = self
            .agent
            .post(&self.url)
            .header("Authorization", &format!("Bearer {}", self.key))
            .send_json(Self::request_body(request))
            .map_err(|e| TransportFailure::Retryable(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportFailure::Retryable(e.to_string()))?;
        match status {
            200..=299 => {}
            401 | 403 => return Err(TransportFailure::Auth(format!("HTTP {status}: {body}"))),
            429 | 500..=599 => {
                return Err(TransportFailure::Retryable(format!("HTTP {status}: {body}")))
            }
            _ => return Err(TransportFailure::Fatal(format!("HTTP {status}: {body}"))),
        }
        let value: serde_json::Value = serde_json::from_str(&body)
            .map_err(|e| TransportFailure::Fatal(format!("response is not JSON: {e}")))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| TransportFailure::Fatal("response has no choices[0].message.content".into()))
    }
}

/// Serves responses from a closure; for fixtures and tests.
pub struct ScriptedTransport<F>(pub F);

impl<F> Transport for ScriptedTransport<F>
where
    F: Fn(&LlmRequest) -> Result<String, TransportFailure> + Send + Sync,
{
    fn send(&self, request: &LlmRequest) -> Result<String, TransportFailure> {
        (self.0)(request)
    }
}

pub type Sleeper = Arc<dyn Fn(Duration) + Send + Sync>;

#[derive(Clone)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_backoff: Duration,
    pub sleeper: Sleeper,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            initial_backoff: Duration::from_secs(1),
            sleeper: Arc::new(std::thread::sleep),
        }
    }
}

impl fmt::Debug for RetryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RetryPolicy")
            .field("max_attempts", &self.max_attempts)
            .field("initial_backoff", &self.initial_backoff)
            .finish()
    }
}

pub struct LlmGateway {
    store: CassetteStore,
    transport: Option<Box<dyn Transport>>,
    retry: RetryPolicy,
    clock: Arc<dyn Clock>,
}

impl LlmGateway {
    pub fn new(store: CassetteStore) -> Self {
        LlmGateway {
            store,
            transport: None,
            retry: RetryPolicy::default(),
            clock: Arc::new(SystemClock),
        }
    }

    pub fn with_transport(mut self, transport: Box<dyn Transport>) -> Self {
        self.transport = Some(transport);
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn store(&self) -> &CassetteStore {
        &self.store
    }

    pub fn complete(&self, request: &LlmRequest, mode: Mode) -> Result<LlmExchange, GatewayError> {
        request.validate()?;
        match mode {
            Mode::Replay => self.store.lookup(request).ok_or_else(|| GatewayError::CassetteMiss {
                key: request.cassette_key(),
            }),
            Mode::Record => {
                if let Some(hit) = self.store.lookup(request) {
                    return Ok(hit);
                }
                let exchange = self.call(request)?;
                self.store.record(&exchange)
            }
            Mode::Live => self.call(request),
        }
    }

    fn call(&self, request: &LlmRequest) -> Result<LlmExchange, GatewayError> {
        let transport = self.transport.as_ref().ok_or_else(|| {
            GatewayError::AuthError(format!("no endpoint configured; set {KEY_ENV}"))
        })?;
        let mut backoff = self.retry.initial_backoff;
        let attempts = self.retry.max_attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=attempts {
            match transport.send(request) {
                Ok(text) => {
                    return Ok(LlmExchange {
                        request: request.clone(),
                        response_text: text,
                        cassette_key: request.cassette_key(),
                        recorded_at: self.clock.now(),
                    })
                }
                Err(TransportFailure::Auth(msg)) => return Err(GatewayError::AuthError(msg)),
                Err(TransportFailure::Fatal(msg)) => {
                    return Err(GatewayError::TransportError {
                        attempts: attempt,
                        message: msg,
                    })
                }
                Err(TransportFailure::Retryable(msg)) => {
                    log::warn!("attempt {attempt}/{attempts} failed: {msg}");
                    last = msg;
                    if attempt < attempts {
                        (self.retry.sleeper)(backoff);
                        backoff *= 2;
                    }
                }
            }
        }
        Err(GatewayError::TransportError {
            attempts,
            message: last,
        })
    }
}
