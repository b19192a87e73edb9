// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Generated by tools/embed_templates.py from templates/*.txt. Do not edit.
#pragma once

namespace capgen::prompts {

inline constexpr const char* kContextPrompt =
    R"CAPGEN_TMPL(You are an AI visual assistant, and you are seeing a single image. You are provided with an English caption describing the image you are looking at. Answer all questions as if you are seeing the image. Design a conversation between you and a person asking about this photo. The answers should be in a tone that a visual AI assistant would use while seeing the image and answering the questions. Ask diverse questions and give corresponding answers.

Include questions asking about the visual content of the image, including the object types, counting the objects, object actions, object locations, relative positions between objects, etc. Only include questions that have definite answers:

(1) one can see the content in the image that the question asks about and can answer confidently;

(2) one can determine confidently from the image that it is not in the image. Do not ask any question that cannot be answered confidently.

Also, include complex questions that are relevant to the content in the image, for example, asking about background knowledge of the objects in the image, asking to discuss events happening in the image, etc. Again, do not ask about uncertain details. Provide detailed answers when answering complex questions.

For example, give detailed examples or reasoning steps to make the content more convincing and well-organized. You can include multiple paragraphs if necessary. You must include a question-answer pair asking about the number of words in the English caption.

I am giving you an example of a conversation too, so that you can follow a format in the conversation you generate.

Example Image: {example_image_link}

Associated Caption in English: A group of people standing outside of a black SUV with various luggage.

Associated Conversation in English:

Response type 1: conversation

Question: What type of vehicle is featured in the image?

Answer: The image features a black sport utility vehicle (SUV).

Question: Where is the vehicle parked?

Answer: The vehicle is parked in an underground parking area, likely in a public garage.

Question: What are the people in the image doing?

Answer: The people are trying to fit all of their luggage into the SUV, likely preparing for a trip.

Response type 2: detailed description

The image shows an underground parking area with a black SUV. Three people are packing luggage into the vehicle, with one person on the left, one in the middle, and one on the right. Scattered around the SUV are two backpacks—one near the left rear wheel, another on the right—and two suitcases, one beside the car and another near the center of the lot. A bicycle is visible on the left. Other cars are parked nearby: one directly behind, one slightly to the left, and another to the right.

Response type 3: complex reasoning

Question: What challenges do these people face?

Answer: A group of people stands outside a black SUV in a parking area, surrounded by suitcases and backpacks. They face the challenge of fitting all their luggage into the vehicle, indicating they have a lot to pack. They need to arrange the luggage efficiently to ensure everything fits and consider the comfort of passengers and the driver's visibility during the trip.

As you can see from the example, the generated text should have 3 response types: A short question-and-answer type conversation, a detailed description, and a question-answer pair for complex reasoning. Now, here is the caption and the image I want you to generate the conversation for:

{english_caption}, {image_link}. Do not hallucinate!
)CAPGEN_TMPL";

inline constexpr const char* kCaptionPrompt =
    R"CAPGEN_TMPL(Task: Generate a caption in {target_language} for an image, balancing information from the English caption and additional context.

Context:

1. English caption (Weight: {english_weight}%): {english_caption}
2. Additional context in {target_language} (Weight: {context_weight}%): {translated_conversation}

Requirements:

1. Create a caption that combines information from both sources according to their weights:
 - {english_weight}% of the information should come from the English caption’s structure and details.
 - {context_weight}% of the information can be enriched or modified based on the additional context.
2. Maintain a level of detail appropriate to the weighted combination of sources.
3. Use natural, fluent {target_language} appropriate for image captions.
4. Ensure the final caption length is similar to the English caption, adjusting slightly if necessary for language differences.

Output:

Provide ONLY the {target_language} caption. The output must be exclusively in {target_language} without any additional text or explanations. Do not hallucinate!
)CAPGEN_TMPL";

inline constexpr const char* kFusionPrompt =
    R"CAPGEN_TMPL(You are merging two conversations about the same image into a single, coherent dialogue.

Conversation A (produced by {producer_a}):
<<<BEGIN CONVERSATION A>>>
{conversation_a}
<<<END CONVERSATION A>>>

Conversation B (produced by {producer_b}):
<<<BEGIN CONVERSATION B>>>
{conversation_b}
<<<END CONVERSATION B>>>

Merge them into one conversation that retains the most relevant and insightful elements from both. Where the conversations disagree, prefer statements supported by both. You must keep exactly one question-answer pair asking about the number of words in the English caption.

The merged output must contain exactly 3 response types, in this order and format:

Response type 1: conversation
Question: ...
Answer: ...

Response type 2: detailed description
...

Response type 3: complex reasoning
Question: ...
Answer: ...

Do not add any text outside this structure. Do not hallucinate!
)CAPGEN_TMPL";

inline constexpr const char* kTranslatePrompt =
    R"CAPGEN_TMPL(Translate the following English text into {target_language}. Preserve the meaning and register. Output ONLY the {target_language} translation, with no additional text, labels, or explanations.

Text: {segment}
)CAPGEN_TMPL";

}  // namespace capgen::prompts
