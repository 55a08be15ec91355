import init, {
  rgba_to_gray, header_len, encrypt, decrypt, metrics, key_sensitivity_map, tdercs_orbit,
} from "./pkg/chaocrypt_wasm.js";

const $ = (id) => document.getElementById(id);
let image = null; // { gray, width, height }

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function drawGray(canvas, gray, width, height) {
  canvas.width = width;
  canvas.height = height;
  const ctx = canvas.getContext("2d");
  const data = ctx.createImageData(width, height);
  for (let i = 0; i < gray.length; i++) {
    data.data.set([gray[i], gray[i], gray[i], 255], 4 * i);
  }
  ctx.putImageData(data, 0, 0);
}

function drawHistogram(canvas, counts) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const max = Math.max(...counts, 1);
  ctx.fillStyle = "#345";
  counts.forEach((c, v) => {
    const h = (c / max) * canvas.height;
    ctx.fillRect(v, canvas.height - h, 1, h);
  });
}

function secret() {
  const s = $("secret").value;
  return s === "" ? undefined : s;
}

function loadFromCanvas(canvas) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const rgba = ctx.getImageData(0, 0, width, height).data;
  image = { gray: rgba_to_gray(new Uint8Array(rgba.buffer)), width, height };
  drawGray($("plain"), image.gray, width, height);
}

function testCard() {
  const c = document.createElement("canvas");
  c.width = c.height = 256;
  const ctx = c.getContext("2d");
  const g = ctx.createLinearGradient(0, 0, 256, 256);
  g.addColorStop(0, "#222");
  g.addColorStop(1, "#eee");
  ctx.fillStyle = g;
  ctx.fillRect(0, 0, 256, 256);
  ctx.fillStyle = "#888";
  ctx.beginPath();
  ctx.arc(160, 100, 60, 0, 2 * Math.PI);
  ctx.fill();
  ctx.fillStyle = "#111";
  ctx.font = "bold 40px sans-serif";
  ctx.fillText("chaos", 30, 220);
  loadFromCanvas(c);
}

async function loadFile(file) {
  const bitmap = await createImageBitmap(file);
  const scale = Math.min(1, 512 / Math.max(bitmap.width, bitmap.height));
  const c = document.createElement("canvas");
  c.width = Math.max(2, Math.round(bitmap.width * scale));
  c.height = Math.max(2, Math.round(bitmap.height * scale));
  c.getContext("2d").drawImage(bitmap, 0, 0, c.width, c.height);
  loadFromCanvas(c);
}

const fmt = (v) => (v === null || v === undefined ? "undefined" : typeof v === "number" ? v.toFixed(4) : String(v));

function runPipeline() {
  showError(null);
  if (!image) testCard();
  try {
    const t0 = performance.now();
    const env = encrypt(image.gray, image.width, image.height, secret());
    const t1 = performance.now();
    const back = decrypt(env, secret());
    const body = env.subarray(header_len());
    drawGray($("cipher"), body, image.width, image.height);
    drawGray($("back"), back, image.width, image.height);
    const same = back.every((v, i) => v === image.gray[i]);
    const m = JSON.parse(metrics(image.gray, env, secret()));
    $("timing").textContent = `encrypted in ${(t1 - t0).toFixed(1)} ms; round trip ${same ? "exact" : "MISMATCH"}`;
    drawHistogram($("hplain"), m.plain_histogram);
    drawHistogram($("hcipher"), m.cipher_histogram);
    const r = m.report;
    const rows = [
      ["D-CC", r.plain.d_cc, r.cipher.d_cc],
      ["H-CC", r.plain.h_cc, r.cipher.h_cc],
      ["V-CC", r.plain.v_cc, r.cipher.v_cc],
      ["Entropy", r.plain.entropy, r.cipher.entropy],
      ["Contrast", r.plain.contrast, r.cipher.contrast],
      ["Energy", r.plain.energy, r.cipher.energy],
      ["Homogeneity", r.plain.homogeneity, r.cipher.homogeneity],
      ["Chi-square", r.plain.chi_square.statistic, r.cipher.chi_square.statistic],
      ["NPCR", "", r.npcr],
      ["UACI", "", r.uaci],
      ["Key sensitivity", "", r.key_sensitivity],
      ["PSNR (dB)", "", r.psnr],
    ];
    $("metrics").innerHTML =
      "<tr><th>Metric</th><th>Plain</th><th>Cipher</th></tr>" +
      rows.map(([n, a, b]) => `<tr><td>${n}</td><td>${a === "" ? "" : fmt(a)}</td><td>${fmt(b)}</td></tr>`).join("");
  } catch (e) {
    showError(e);
  }
}

function runSensitivity() {
  showError(null);
  if (!image) testCard();
  try {
    const mask = key_sensitivity_map(image.gray, image.width, image.height, secret());
    drawGray($("mask"), mask, image.width, image.height);
    const changed = mask.reduce((n, v) => n + (v ? 1 : 0), 0);
    $("npcr").textContent = `${((100 * changed) / mask.length).toFixed(4)}% of pixels changed`;
  } catch (e) {
    showError(e);
  }
}

function plotOrbit() {
  showError(null);
  const num = (id) => Number($(id).value);
  try {
    const mu = num("mu");
    const pts = tdercs_orbit(num("x0"), mu, num("alpha"), num("delay"), num("n"));
    const c = $("orbit");
    const ctx = c.getContext("2d");
    ctx.clearRect(0, 0, c.width, c.height);
    const half = c.width / 2 - 10;
    ctx.strokeStyle = "#ccc";
    ctx.beginPath();
    ctx.ellipse(c.width / 2, c.height / 2, half, half * mu, 0, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.fillStyle = "rgba(20, 60, 140, 0.6)";
    for (let i = 0; i < pts.length; i += 2) {
      ctx.fillRect(c.width / 2 + pts[i] * half - 1, c.height / 2 - pts[i + 1] * half - 1, 2, 2);
    }
  } catch (e) {
    showError(e);
  }
}

await init();
$("sample").onclick = () => testCard();
$("file").onchange = (e) => e.target.files[0] && loadFile(e.target.files[0]).catch(showError);
$("run").onclick = runPipeline;
$("sens").onclick = runSensitivity;
$("plot").onclick = plotOrbit;
testCard();
plotOrbit();
