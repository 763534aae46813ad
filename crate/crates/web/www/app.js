import init, { graph_summary, decode_demo, success_sweep } from "./pkg/ssflip_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const graphArgs = () => [num("na"), num("nb"), num("da"), num("db")];

let demo = null;

function guard(out, f) {
  try {
    f();
  } catch (e) {
    $(out).textContent = `error: ${e}`;
  }
}

function showGraph() {
  guard("graph-out", () => {
    const r = JSON.parse(graph_summary(...graphArgs(), num("seed")));
    const lines = [`n = ${r.parameters.n}, k = ${r.parameters.k}, generator weight ${r.parameters.row_weight}`];
    for (const s of r.expansion) {
      lines.push(`${s.side}: min |Γ(S)| for |S| = 1.. = [${s.min_neighbors.slice(1).join(", ")}]`);
      for (const c of s.certifications) {
        lines.push(`  δ < ${c.delta_bound.toFixed(3)}: certified up to |S| = ${c.size} (δ = ${c.delta.toFixed(3)})`);
      }
    }
    $("graph-out").textContent = lines.join("\n");
  });
}

function runDecode() {
  guard("decode-out", () => {
    demo = JSON.parse(
      decode_demo(...graphArgs(), num("seed"), num("eseed"), num("weight"), $("etype").value),
    );
    $("step").max = demo.steps.length;
    $("step").value = demo.steps.length;
    const verdict = demo.correctly_decoded === null ? "n/a" : demo.correctly_decoded;
    $("decode-out").textContent =
      `error support ${JSON.stringify(demo.error)}\n` +
      `initial syndrome weight ${demo.syndrome.length}, ${demo.steps.length} flips\n` +
      demo.steps
        .map((s, i) => `${i + 1}: generator ${s.generator} flips [${s.flip}] syndrome ${s.weight_before} -> ${s.weight_after}`)
        .join("\n") +
      `\nsyndrome cleared: ${demo.success}, equivalent to the error: ${verdict}`;
    drawStep();
  });
}

// Residual error and the flip applied at `step` (1-based; 0 is the start).
function stateAt(step) {
  const err = new Set(demo.error);
  let last = [];
  for (let i = 0; i < step; i++) {
    last = demo.steps[i].flip;
    for (const q of last) err.has(q) ? err.delete(q) : err.add(q);
  }
  return { err, last: new Set(last) };
}

function drawGrid(ctx, x0, y0, rows, cols, cell, colorOf, title) {
  ctx.fillStyle = "#222";
  ctx.fillText(title, x0, y0 - 6);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      ctx.fillStyle = colorOf(r * cols + c);
      ctx.fillRect(x0 + c * cell, y0 + r * cell, cell - 1, cell - 1);
    }
  }
}

function drawStep() {
  if (!demo) return;
  const step = num("step");
  $("step-label").textContent = `${step} / ${demo.steps.length}`;
  const { err, last } = stateAt(step);
  const ctx = $("grid").getContext("2d");
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.font = "12px system-ui";
  const { n_a, n_b } = demo;
  const [cr, cc] = demo.check_grid;
  const cell = Math.max(4, Math.floor(280 / Math.max(n_a, n_b)));
  const color = (offset) => (i) => {
    const q = i + offset;
    if (last.has(q)) return "#39f";
    return err.has(q) ? "#d33" : "#e8e8e8";
  };
  drawGrid(ctx, 10, 24, n_a, n_a, cell, color(0), "qubits in A×A");
  drawGrid(ctx, 20 + n_a * cell, 24, n_b, n_b, cell, color(n_a * n_a), "qubits in B×B");
  const unsat = new Set(step === 0 ? demo.syndrome : demo.steps[step - 1].syndrome);
  drawGrid(ctx, 40 + (n_a + n_b) * cell, 24, cr, cc, cell, (i) => (unsat.has(i) ? "#fb3" : "#e8e8e8"), "checks");
}

function runSweep() {
  guard("sweep-out", () => {
    const r = JSON.parse(success_sweep(...graphArgs(), num("seed"), num("maxw"), num("trials")));
    const ctx = $("chart").getContext("2d");
    const w = ctx.canvas.width, h = ctx.canvas.height, pad = 30;
    ctx.clearRect(0, 0, w, h);
    ctx.strokeStyle = "#999";
    ctx.strokeRect(pad, 10, w - pad - 10, h - pad - 10);
    ctx.font = "12px system-ui";
    const max = num("maxw");
    const series = { X: "#d33", Z: "#39f" };
    for (const [ty, col] of Object.entries(series)) {
      const pts = r.per_weight.filter((p) => p.error_type === ty);
      ctx.strokeStyle = col;
      ctx.beginPath();
      pts.forEach((p, i) => {
        const x = pad + ((p.weight - 1) / Math.max(1, max - 1)) * (w - pad - 20);
        const y = 10 + (1 - (p.correct_rate ?? p.success_rate)) * (h - pad - 10);
        i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
      });
      ctx.stroke();
    }
    ctx.fillStyle = "#222";
    ctx.fillText("1.0", 2, 16);
    ctx.fillText("0.0", 2, h - pad);
    ctx.fillText(`error weight 1 .. ${max}`, w / 2 - 40, h - 8);
    $("sweep-out").textContent =
      r.per_weight.map((p) => `${p.error_type} w=${p.weight}: ${(p.correct_rate ?? p.success_rate).toFixed(3)}`).join("\n") +
      "\n" + r.notes.join("\n");
  });
}

await init();
$("gen").onclick = showGraph;
$("decode").onclick = runDecode;
$("step").oninput = drawStep;
$("sweep").onclick = runSweep;
showGraph();
