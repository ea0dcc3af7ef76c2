//! Signed recourse receipts.
//!
//! A receipt is a plain-text body followed by a detached Ed25519 signature
//! over the body's exact bytes and the id of the signing key:
//!
//! ```text
//! RECEIPT-V1
//! created: 2026-10-15T09:30:00Z
//! model: sha256:4f1c…
//! input: "A"=8, "B"="red"
//! goal: to-positive
//! plan[1]: distance=4.5; score-gain=1.3; outcome=positive; changes="A":8->10, "B":"red"->"blue"
//! signature: <base64>
//! key-id: <hex>
//! ```
//!
//! Lines end in LF, reals are written with 9 significant digits and strings
//! are JSON-quoted.

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use chrono::{DateTime, SecondsFormat, Utc};
use ed25519_dalek::{Signature, Signer, SigningKey, VerifyingKey};
use rand::rngs::OsRng;
use sha2::{Digest, Sha256};

use crate::error::ReceiptError;
use crate::format::sig9;
use crate::model::{model_hash, EbmModel, FeatureValue, Instance};
use crate::recourse::{verify_plan, RecourseGoal, RecoursePlan};

pub use ed25519_dalek::{SigningKey as SecretKey, VerifyingKey as PublicKey};

const MAGIC: &str = "RECEIPT-V1";
const SECRET_HEADER: &str = "-----RECOURSE ED25519 SECRET KEY-----";
const PUBLIC_HEADER: &str = "-----RECOURSE ED25519 PUBLIC KEY-----";
const SIGNATURE_TAG: &[u8] = b"signature: ";
const KEY_ID_TAG: &[u8] = b"key-id: ";

/// Outcome of [`verify_receipt`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The signature does not match the body.
    Tampered,
    /// The receipt names a different signing key.
    WrongKey,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Tampered => "tampered",
            Verdict::WrongKey => "wrong-key",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receipt {
    /// Canonical body, exactly the signed bytes.
    pub body: Vec<u8>,
    pub signature: Vec<u8>,
    pub key_id: String,
}

impl Receipt {
    /// The receipt file: body, then `signature:` and `key-id:` lines.
    pub fn render(&self) -> Vec<u8> {
        let mut out = self.body.clone();
        out.extend_from_slice(SIGNATURE_TAG);
        out.extend_from_slice(BASE64.encode(&self.signature).as_bytes());
        out.push(b'\n');
        out.extend_from_slice(KEY_ID_TAG);
        out.extend_from_slice(self.key_id.as_bytes());
        out.push(b'\n');
        out
    }

    /// Splits a receipt file into body, signature and key id. The body is kept
    /// as raw bytes; it need not be valid UTF-8 to be checked.
    pub fn parse(bytes: &[u8]) -> Result<Self, ReceiptError> {
        let malformed = |m: &str| ReceiptError::Malformed(m.to_string());
        let text = bytes.strip_suffix(b"\n").ok_or_else(|| malformed("missing final newline"))?;
        let last_nl = text
            .iter()
            .rposition(|b| *b == b'\n')
            .ok_or_else(|| malformed("missing key-id line"))?;
        let key_line = &text[last_nl + 1..];
        let key_id = key_line
            .strip_prefix(KEY_ID_TAG)
            .ok_or_else(|| malformed("last line must be key-id"))?;
        let key_id = std::str::from_utf8(key_id).map_err(|_| malformed("key-id is not text"))?;
        let rest = &text[..last_nl];
        let sig_at = rest
            .windows(SIGNATURE_TAG.len())
            .rposition(|w| w == SIGNATURE_TAG)
            .ok_or_else(|| malformed("missing signature line"))?;
        let sig_text = std::str::from_utf8(&rest[sig_at + SIGNATURE_TAG.len()..]).map_err(|_| malformed("signature is not text"))?;
        let signature = BASE64
            .decode(sig_text)
            .map_err(|e| ReceiptError::Malformed(format!("signature is not base64: {e}")))?;
        let body = rest[..sig_at].to_vec();
        Ok(Self {
            body,
            signature,
            key_id: key_id.to_string(),
        })
    }

    /// Value of the first body line with this key, e.g. `model` or `created`.
    pub fn field(&self, key: &str) -> Option<String> {
        self.fields().into_iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Body lines as `(key, value)` pairs, for display.
    pub fn fields(&self) -> Vec<(String, String)> {
        String::from_utf8_lossy(&self.body)
            .lines()
            .skip(1)
            .filter_map(|l| l.split_once(": ").map(|(k, v)| (k.to_string(), v.to_string())))
            .collect()
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn render_value(model: &EbmModel, feature: usize, value: FeatureValue) -> String {
    match value {
        FeatureValue::Number(v) => sig9(v),
        FeatureValue::Level(l) => quote(model.feature(feature).level_name(l).unwrap_or("?")),
    }
}

/// The canonical body for the given contents. Same inputs, same bytes.
pub fn receipt_body(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    plans: &[RecoursePlan],
    created: DateTime<Utc>,
) -> String {
    let mut body = String::new();
    body.push_str(MAGIC);
    body.push('\n');
    body.push_str(&format!("created: {}\n", created.to_rfc3339_opts(SecondsFormat::Secs, true)));
    body.push_str(&format!("model: {}\n", model_hash(model)));
    let input: Vec<String> = model
        .features()
        .iter()
        .enumerate()
        .map(|(i, spec)| format!("{}={}", quote(&spec.name), render_value(model, i, instance.value(i))))
        .collect();
    body.push_str(&format!("input: {}\n", input.join(", ")));
    body.push_str(&format!("goal: {}\n", goal.describe()));
    for (n, plan) in plans.iter().enumerate() {
        let changes: Vec<String> = plan
            .changes
            .iter()
            .map(|c| {
                format!(
                    "{}:{}->{}",
                    quote(&model.feature(c.feature).name),
                    render_value(model, c.feature, c.old_value),
                    render_value(model, c.feature, c.new_value)
                )
            })
            .collect();
        body.push_str(&format!(
            "plan[{}]: distance={}; score-gain={}; outcome={}; changes={}\n",
            n + 1,
            sig9(plan.distance),
            sig9(plan.score_gain),
            plan.new_prediction.label(),
            changes.join(", ")
        ));
    }
    body
}

/// Re-verifies every plan against the model and signs the canonical body.
pub fn build_and_sign(
    model: &EbmModel,
    instance: &Instance,
    goal: &RecourseGoal,
    plans: &[RecoursePlan],
    key: &SigningKey,
    created: DateTime<Utc>,
) -> Result<Receipt, ReceiptError> {
    if plans.is_empty() {
        return Err(ReceiptError::NoPlans);
    }
    for (n, plan) in plans.iter().enumerate() {
        let mut check = plan.clone();
        if !plan.verified || !verify_plan(model, instance, &mut check, goal) {
            return Err(ReceiptError::UnverifiedPlan(n + 1));
        }
    }
    let body = receipt_body(model, instance, goal, plans, created).into_bytes();
    let signature = key
        .try_sign(&body)
        .map_err(|e| ReceiptError::Signing(e.to_string()))?;
    Ok(Receipt {
        body,
        signature: signature.to_bytes().to_vec(),
        key_id: key_id(&key.verifying_key()),
    })
}

/// Checks a receipt against `key`. A key-id that names another key is
/// reported as [`Verdict::WrongKey`] before the signature is examined.
pub fn verify_receipt(receipt: &Receipt, key: &VerifyingKey) -> Verdict {
    if receipt.key_id != key_id(key) {
        return Verdict::WrongKey;
    }
    let Ok(bytes) = <[u8; 64]>::try_from(receipt.signature.as_slice()) else {
        return Verdict::Tampered;
    };
    match key.verify_strict(&receipt.body, &Signature::from_bytes(&bytes)) {
        Ok(()) => Verdict::Valid,
        Err(_) => Verdict::Tampered,
    }
}

/// Parses and verifies a receipt file.
pub fn verify_receipt_bytes(bytes: &[u8], key: &VerifyingKey) -> Result<Verdict, ReceiptError> {
    Ok(verify_receipt(&Receipt::parse(bytes)?, key))
}

/// First 8 bytes of SHA-256 over the public key, in hex.
pub fn key_id(key: &VerifyingKey) -> String {
    hex::encode(&Sha256::digest(key.as_bytes())[..8])
}

pub fn generate_key() -> SigningKey {
    SigningKey::generate(&mut OsRng)
}

pub fn encode_secret_key(key: &SigningKey) -> String {
    format!("{SECRET_HEADER}\n{}\n", BASE64.encode(key.to_bytes()))
}

pub fn encode_public_key(key: &VerifyingKey) -> String {
    format!("{PUBLIC_HEADER}\n{}\n", BASE64.encode(key.as_bytes()))
}

fn decode_key_file(text: &str, header: &str) -> Result<[u8; 32], ReceiptError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some(header) {
        return Err(ReceiptError::MalformedKey(format!("expected header {header}")));
    }
    let payload = lines
        .next()
        .ok_or_else(|| ReceiptError::MalformedKey("missing key data".into()))?;
    if lines.next().is_some() {
        return Err(ReceiptError::MalformedKey("unexpected trailing lines".into()));
    }
    let raw = BASE64
        .decode(payload)
        .map_err(|e| ReceiptError::MalformedKey(format!("key data is not base64: {e}")))?;
    <[u8; 32]>::try_from(raw.as_slice())
        .map_err(|_| ReceiptError::MalformedKey(format!("expected 32 key bytes, got {}", raw.len())))
}

pub fn decode_secret_key(text: &str) -> Result<SigningKey, ReceiptError> {
    Ok(SigningKey::from_bytes(&decode_key_file(text, SECRET_HEADER)?))
}

pub fn decode_public_key(text: &str) -> Result<VerifyingKey, ReceiptError> {
    VerifyingKey::from_bytes(&decode_key_file(text, PUBLIC_HEADER)?)
        .map_err(|e| ReceiptError::MalformedKey(format!("not a valid public key: {e}")))
}
