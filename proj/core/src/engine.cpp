#include "memetic/engine.hpp"

#include <cmath>

namespace memetic {

namespace {

using ojson = nlohmann::ordered_json;

ojson value_json(const ControlValue& v) {
  if (v.is_detent()) return v.index();
  return v.real();
}

ojson values_json(const std::vector<std::pair<std::string, double>>& values) {
  ojson j = ojson::object();
  for (const auto& [id, v] : values) j[id] = v;
  return j;
}

ojson plan_json(const RecallPlan& plan) {
  ojson tracks = ojson::array();
  for (const auto& t : plan.tracks()) tracks.push_back({{"id", t.id}, {"start", t.start}, {"target", t.target}});
  return {{"duration_ms", plan.duration_ms()}, {"easing", to_string(plan.easing())}, {"tracks", std::move(tracks)}};
}

int total_ticks(const RecallSettings& r) {
  return std::max(1, static_cast<int>(std::ceil(r.duration_ms / r.tick_ms)));
}

Broadcast error_broadcast(const Error& e, std::string_view command) {
  ojson body;
  body["error"] = e.name();
  body["message"] = e.detail();
  if (!command.empty()) body["command"] = command;
  return {"error", std::move(body)};
}

}  // namespace

std::string Broadcast::to_message() const {
  ojson j;
  j["kind"] = kind;
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump();
}

void Outcome::append(Outcome&& other) {
  for (auto& b : other.broadcasts) broadcasts.push_back(std::move(b));
  if (other.dispatch) dispatch = std::move(other.dispatch);
  if (!error) error = other.error;
}

// ---------------------------------------------------------------------------

Engine::Engine(std::shared_ptr<const MixerConfig> config, std::shared_ptr<Clock> clock, EngineOptions options)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()),
      options_(options),
      surface_(config_->make_surface()),
      board_(config_->vocabulary) {}

void Engine::record(LogKind kind, ojson payload) { log_.append(kind, std::move(payload), clock_->now_ms()); }

std::string Engine::input_text() const { return board_.empty() ? std::string{} : board_.read(); }

Outcome Engine::apply(const Command& command) {
  try {
    return apply_checked(command);
  } catch (const Error& e) {
    ojson payload;
    payload["stage"] = "command";
    payload["error"] = e.name();
    payload["message"] = e.detail();
    payload["command"] = to_json(command);
    record(LogKind::Error, std::move(payload));
    Outcome out;
    out.broadcasts.push_back(error_broadcast(e, command_kind(command)));
    out.error = e.kind();
    return out;
  }
}

Outcome Engine::apply_checked(const Command& command) {
  return std::visit(
      [this](const auto& c) -> Outcome {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, cmd::SetControl>) return set_control(c);
        if constexpr (std::is_same_v<T, cmd::SelectPersonalityPreset>) return select_preset(c.id);
        if constexpr (std::is_same_v<T, cmd::SelectMode>) return select_mode(c.id);
        if constexpr (std::is_same_v<T, cmd::PlaceTile>) return place_tile(c);
        if constexpr (std::is_same_v<T, cmd::RemoveTile>) return remove_tile(c);
        if constexpr (std::is_same_v<T, cmd::Submit>) return submit();
        if constexpr (std::is_same_v<T, cmd::SetMixerless>) return set_mixerless(c.value);
      },
      command);
}

Outcome Engine::set_control(const cmd::SetControl& c) {
  const auto& bank = config_->presets;
  if (c.id == bank.preset_control()) {
    // Turning the preset selector is a preset selection. Validate the index
    // through a scratch surface so errors match set_control's.
    ControlSurface scratch = surface_;
    int position = scratch.set(c.id, c.value).index();
    return select_preset(bank.personality_at(position).id);
  }
  auto stored = surface_.set(c.id, c.value);
  if (recall_) recall_->released.insert(c.id);
  ojson payload;
  payload["id"] = c.id;
  payload["value"] = c.value;
  payload["stored"] = value_json(stored);
  payload["revision"] = surface_.revision();
  record(LogKind::ControlSet, std::move(payload));
  Outcome out;
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::select_preset(const std::string& id) {
  const auto& bank = config_->presets;
  auto plan = select_personality_preset(surface_, bank, id);
  int position = bank.personality_position(id);
  surface_.set(bank.preset_control(), position);
  ojson payload;
  payload["id"] = id;
  payload["position"] = position;
  payload["revision"] = surface_.revision();
  payload["plan"] = plan_json(plan);
  record(LogKind::PresetSelected, std::move(payload));
  recall_ = ActiveRecall{std::move(plan), {}, 0};
  Outcome out;
  out.broadcasts.push_back(state_changed());
  if (options_.synchronous_recall) out.append(run_recall_to_end());
  return out;
}

Outcome Engine::run_recall_to_end() {
  Outcome out;
  while (recall_) out.append(advance_recall());
  return out;
}

Outcome Engine::advance_recall() {
  Outcome out;
  if (!recall_) return out;
  const auto& settings = config_->presets.recall();
  int k = ++recall_->ticks_done;
  bool final_tick = k >= total_ticks(settings);
  double t = final_tick ? recall_->plan.duration_ms() : std::min(k * settings.tick_ms, recall_->plan.duration_ms());

  std::vector<std::pair<std::string, double>> values;
  for (auto& [fader, v] : recall_->plan.tick(t)) {
    if (!recall_->released.count(fader)) values.emplace_back(std::move(fader), v);
  }
  if (!values.empty()) surface_.set_many(values);

  ojson body;
  body["t"] = t;
  body["final"] = final_tick;
  body["revision"] = surface_.revision();
  body["values"] = values_json(values);
  record(LogKind::FaderMoved, body);
  out.broadcasts.push_back({"fader_moved", std::move(body)});
  if (final_tick) {
    recall_.reset();
    out.broadcasts.push_back(state_changed());
  }
  return out;
}

Outcome Engine::select_mode(const std::string& id) {
  const auto& mode = memetic::select_mode(surface_, config_->presets, id);
  ojson payload;
  payload["id"] = mode.id;
  payload["position"] = config_->presets.mode_position(id);
  payload["revision"] = surface_.revision();
  record(LogKind::ModeSelected, std::move(payload));
  Outcome out;
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::place_tile(const cmd::PlaceTile& c) {
  board_.place(c.row, c.col, c.word);
  record(LogKind::TilePlaced, {{"row", c.row}, {"col", c.col}, {"word", c.word}});
  Outcome out;
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::remove_tile(const cmd::RemoveTile& c) {
  auto word = board_.remove(c.row, c.col);
  record(LogKind::TileRemoved, {{"row", c.row}, {"col", c.col}, {"word", word}});
  Outcome out;
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::set_mixerless(bool value) {
  mixerless_ = value;
  record(LogKind::MixerlessSet, {{"value", value}});
  Outcome out;
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::submit() {
  if (busy_) throw Error(ErrorKind::Busy, "a completion is already in flight");
  std::string text = board_.read();
  auto snapshot = surface_.snapshot();
  const auto& mode = config_->presets.active_mode(snapshot);
  auto chain = compile(snapshot, text, mode, config_->descriptors, mixerless_);

  ojson submitted;
  submitted["input_text"] = text;
  submitted["revision"] = snapshot.revision();
  submitted["mode"] = mode.id;
  submitted["mixerless"] = mixerless_;
  record(LogKind::Submitted, std::move(submitted));
  record(LogKind::ChainCompiled, {{"chain", chain.serialize()}});

  busy_ = true;
  pending_input_ = text;
  Outcome out;
  out.dispatch = CompletionRequest{std::move(chain), config_->backend.timeout, config_->backend.retry_budget};
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::complete(const CompletionResult& result) {
  Outcome out;
  if (!busy_) return out;
  ojson payload;
  payload["text"] = result.text;
  payload["backend"] = result.backend_id;
  payload["latency_ms"] = result.latency_ms;
  payload["retries"] = result.retries;
  record(LogKind::ResponseReceived, std::move(payload));
  busy_ = false;
  last_input_ = pending_input_;
  last_response_ = result.text;
  ojson body;
  body["input_text"] = *last_input_;
  body["response"] = result.text;
  body["backend"] = result.backend_id;
  out.broadcasts.push_back({"response_ready", std::move(body)});
  out.broadcasts.push_back(state_changed());
  return out;
}

Outcome Engine::fail_completion(const Error& error) {
  Outcome out;
  if (!busy_) return out;
  ojson payload;
  payload["stage"] = "completion";
  payload["error"] = error.name();
  payload["message"] = error.detail();
  record(LogKind::Error, std::move(payload));
  busy_ = false;
  out.broadcasts.push_back(error_broadcast(error, "submit"));
  out.broadcasts.push_back(state_changed());
  out.error = error.kind();
  return out;
}

// ---------------------------------------------------------------------------

Broadcast Engine::state_changed() const { return {"state_changed", {{"state", state_document()}}}; }

ojson Engine::state_document() const {
  const auto& bank = config_->presets;
  auto snapshot = surface_.snapshot();

  ojson specs = ojson::array();
  for (const auto& e : snapshot.entries()) {
    const auto& s = surface_.spec(e.id);
    ojson j;
    j["id"] = s.id;
    j["kind"] = to_string(s.kind);
    j["group"] = to_string(s.group);
    if (!s.pole_labels.empty()) j["labels"] = s.pole_labels;
    if (!s.position_labels.empty()) j["positions"] = s.position_labels;
    specs.push_back(std::move(j));
  }
  ojson values = ojson::object();
  for (const auto& e : snapshot.entries()) values[e.id] = value_json(e.value);

  ojson board = ojson::array();
  for (const auto& p : board_.placements()) board.push_back({{"row", p.row}, {"col", p.col}, {"word", p.word}});

  ojson doc;
  doc["revision"] = surface_.revision();
  doc["specs"] = std::move(specs);
  doc["values"] = std::move(values);
  doc["mode"] = bank.active_mode(snapshot).id;
  doc["personality_preset"] = bank.personality_at(snapshot.at(bank.preset_control()).value.index()).id;
  doc["board"] = std::move(board);
  doc["input_text"] = input_text();
  doc["last_input"] = last_input_ ? ojson(*last_input_) : ojson(nullptr);
  doc["last_response"] = last_response_ ? ojson(*last_response_) : ojson(nullptr);
  doc["busy"] = busy_;
  doc["mixerless"] = mixerless_;
  doc["recall"] = {{"active", recall_.has_value()}, {"ticks_done", recall_ ? recall_->ticks_done : 0}};
  return doc;
}

}  // namespace memetic
