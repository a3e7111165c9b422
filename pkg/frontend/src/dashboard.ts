// Dashboard panels: the accepted-only distribution and an on-demand
// agreement check between two annotators.

import { getAgreement, getDistribution, ServiceError } from "./api.js";
import { renderBanner, renderDashboard } from "./render.js";

export async function refreshDistributionPanel(
  container: HTMLElement,
  corpusId: string,
  acceptedOnly: boolean,
): Promise<void> {
  try {
    const dist = await getDistribution(corpusId, acceptedOnly);
    container.replaceChildren(renderDashboard(dist));
  } catch (err) {
    const message =
      err instanceof ServiceError
        ? `distribution unavailable: ${err.message}`
        : "distribution unavailable";
    container.replaceChildren(renderBanner(message, "error"));
  }
}

export async function refreshAgreementPanel(
  container: HTMLElement,
  corpusId: string,
  annotatorA: string,
  annotatorB: string,
): Promise<void> {
  try {
    const result = await getAgreement(corpusId, annotatorA, annotatorB);
    const box = document.createElement("div");
    box.className = "agreement";
    const headline = document.createElement("p");
    headline.textContent =
      `kappa ${result.kappa.toFixed(4)} over ${result.n_items} shared items ` +
      `(observed ${result.observed_agreement.toFixed(4)}, ` +
      `expected ${result.expected_agreement.toFixed(4)})`;
    box.appendChild(headline);
    const perFrame = Object.entries(result.per_frame);
    if (perFrame.length > 0) {
      const list = document.createElement("ul");
      list.className = "agreement-per-frame";
      for (const [frame, value] of perFrame) {
        const item = document.createElement("li");
        item.textContent = `${frame}: ${value.toFixed(4)}`;
        list.appendChild(item);
      }
      box.appendChild(list);
    }
    container.replaceChildren(box);
  } catch (err) {
    // degenerate marginals (single shared label) land here too; show why
    const message =
      err instanceof ServiceError
        ? `agreement unavailable: ${err.message}`
        : "agreement unavailable";
    container.replaceChildren(renderBanner(message, "error"));
  }
}
