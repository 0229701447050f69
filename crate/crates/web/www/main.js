import init, { risk_curves, pinsker_curve, simulate_round } from "./pkg/covert_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function legend(el, series) {
  el.innerHTML = series
    .map((s) => `<span><i class="swatch" style="background:${s.color}"></i>${s.label}</span>`)
    .join("");
}

function plot(canvas, xs, series, yMax = 1) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 10, w - pad - 10, h - pad - 10);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - pad - 10);
  const py = (y) => h - pad - (Math.min(y, yMax) / yMax) * (h - pad - 20);
  for (let k = 0; k <= 4; k++) {
    const y = (yMax * k) / 4;
    ctx.fillText(y.toFixed(2), 4, py(y) + 4);
    const x = x0 + ((x1 - x0) * k) / 4;
    ctx.fillText(x.toFixed(2), px(x) - 10, h - pad + 16);
  }
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.ys.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
  }
}

function drawRisk() {
  const points = JSON.parse(risk_curves(num("rc-degree"), num("rc-lo"), num("rc-hi"), 200));
  const xs = points.map((p) => p.epsilon);
  const series = [
    { label: "output risk", color: "#d95f02", ys: points.map((p) => p.output_risk) },
    { label: "message risk, public", color: "#1b9e77", ys: points.map((p) => p.public_message_risk) },
    { label: "total, public", color: "#7570b3", ys: points.map((p) => p.public_total) },
    { label: "total, private", color: "#e7298a", ys: points.map((p) => p.private_total) },
    { label: "per-rebel many rate at rho = 0.8", color: "#66a61e", ys: points.map((p) => p.success_per_rebel) },
  ];
  legend($("rc-legend"), series);
  plot($("rc-canvas"), xs, series);
}

function drawPinsker() {
  const points = JSON.parse(pinsker_curve(num("pk-hi"), 200));
  const xs = points.map((p) => p.epsilon);
  const series = [
    { label: "total variation", color: "#1b9e77", ys: points.map((p) => p.total_variation) },
    { label: "eps / sqrt 2", color: "#d95f02", ys: points.map((p) => p.bound) },
  ];
  legend($("pk-legend"), series);
  plot($("pk-canvas"), xs, series, Math.max(1, num("pk-hi") / Math.SQRT2));
}

const COLORS = { "rebel-many": "#d95f02", rebel: "#fdb863", obedient: "#b2abd2", undercover: "#222" };

function playRound() {
  const r = JSON.parse(
    simulate_round(num("sr-n"), num("sr-d"), $("sr-protocol").value, num("sr-eps"), num("sr-rho"),
      num("sr-u"), $("sr-private").checked, BigInt(num("sr-seed")))
  );
  const canvas = $("sr-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cols = Math.ceil(Math.sqrt((r.n * canvas.width) / canvas.height));
  const cell = Math.floor(canvas.width / cols);
  r.agents.forEach((kind, i) => {
    const x = (i % cols) * cell, y = Math.floor(i / cols) * cell;
    ctx.fillStyle = COLORS[kind];
    ctx.fillRect(x, y, cell - 1, cell - 1);
    if (r.arrested[i]) {
      ctx.strokeStyle = "#c00";
      ctx.strokeRect(x + 0.5, y + 0.5, cell - 2, cell - 2);
    }
  });
  legend($("sr-legend"), [
    { label: "rebel, says many", color: COLORS["rebel-many"] },
    { label: "rebel, silent", color: COLORS.rebel },
    { label: "obedient", color: COLORS.obedient },
    { label: "undercover", color: COLORS.undercover },
    { label: "arrested (outline)", color: "#c00" },
  ]);
  $("round-stats").textContent =
    `rebels ${r.rebels}, undercover ${r.undercover}, saying many ${r.rebels_many} ` +
    `(${(100 * r.fraction_many).toFixed(1)}%, ${r.succeeded ? "at least a third" : "below a third"})\n` +
    `arrest rate: rebels ${r.rebel_arrest_rate.toFixed(3)}, obedient ${r.obedient_arrest_rate.toFixed(3)}`;
}

function guarded(fn) {
  return () => {
    try {
      fn();
    } catch (e) {
      alert(e);
    }
  };
}

await init();
$("rc-go").onclick = guarded(drawRisk);
$("pk-go").onclick = guarded(drawPinsker);
$("sr-go").onclick = guarded(playRound);
drawRisk();
drawPinsker();
playRound();
